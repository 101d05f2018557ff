#pragma once
/// \file cpp_law.hpp
/// The compound-Poisson description of the component census.
///
/// Finite-n side: each component shape k (within a box 0 <= k_r <=
/// floor(alpha_r n), k != 0, zero coordinates allowed) carries the jump
/// weight
///   w(k) = n^{|k|-1} p_n(k) prod_s [ mu_s prod_r (1-p_rs)^{mu_r n - k_r/2} ]^{k_s} / k_s!
/// with mu the empirical measure counts/n.  The census of the graph,
/// conditioned on every component fitting in the box, is exactly the law of
/// independent Poisson(n w(k)) component counts conditioned on reproducing
/// the vertex counts.  This file computes both sides exactly at small n
/// (double-double arithmetic throughout), the limiting law h(k)/q, and a
/// sampler for the compound-Poisson picture.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "mtgraph/common.hpp"
#include "mtgraph/conn.hpp"
#include "mtgraph/dd.hpp"
#include "mtgraph/dual.hpp"
#include "mtgraph/model.hpp"
#include "mtgraph/numerics.hpp"
#include "mtgraph/rng.hpp"
#include "mtgraph/tree.hpp"
#include "mtgraph/typevec.hpp"

namespace mtg {

/// Connection probabilities below this are treated as numerically unknown:
/// the double-double recursion carries ~1e-31 of absolute cancellation
/// noise, so values under the floor have fewer than ~5 reliable digits.
inline constexpr double kConnTrustFloor = 1e-26;

struct JumpLaw {
  std::vector<TypeVec> ks;  // retained support, odometer order
  std::vector<dd> w;        // weights w(k), same indexing
  dd Z;                     // total mass (retained + tail estimate)
  double tail_estimate = 0.0;
  double retained_mass = 1.0;  // retained / Z
  bool truncated = false;      // true when a tail estimate stands in for mass
  long long floored = 0;       // lattice points dropped below the trust floor
  std::vector<long long> caps;
};

namespace detail {

/// Everything needed to evaluate w(k) on a box.
struct JumpWeightEval {
  const Model* model;
  ConnTableDD table;
  std::vector<dd> log_mu;              // log(counts_s / n)
  std::vector<dd> log_1mp;             // log(1 - p_rs), row-major
  std::vector<std::vector<dd>> lfact;  // per type, log j! for j <= cap
  dd log_n;

  JumpWeightEval(const Model& m, const std::vector<long long>& caps)
      : model(&m), table(TypeVec(caps.begin(), caps.end()), m.n(), m.kappa()) {
    const int S = m.S();
    const dd n(static_cast<double>(m.n()));
    log_n = log_dd(n);
    log_mu.resize(S);
    for (int s = 0; s < S; ++s)
      log_mu[s] = log_dd(dd(static_cast<double>(m.counts[s])) / n);
    log_1mp.resize(S * S);
    for (int r = 0; r < S; ++r)
      for (int s = 0; s < S; ++s) {
        dd omp = dd(1.0) - dd(m.kappa()(r, s)) / n;
        if (omp.hi <= 0.0)
          throw ValidationError("BadArgument",
                                "jump weights need edge probabilities strictly below 1");
        log_1mp[r * S + s] = log_dd(omp);
      }
    lfact.resize(S);
    for (int s = 0; s < S; ++s) {
      lfact[s].resize(caps[s] + 1, dd(0.0));
      for (long long j = 2; j <= caps[s]; ++j)
        lfact[s][j] = lfact[s][j - 1] + log_dd(dd(static_cast<double>(j)));
    }
  }

  /// w(k) as a dd, or zero if the connection probability is below the
  /// trust floor (reported through `floored`).
  dd weight(const TypeVec& k, long long* floored) const {
    dd p = table.at(k);
    if (!(p.hi > kConnTrustFloor)) {
      if (floored) ++(*floored);
      return dd(0.0);
    }
    const int S = model->S();
    dd lw = dd(static_cast<double>(total(k) - 1)) * log_n + log_dd(p);
    for (int s = 0; s < S; ++s) {
      if (k[s] == 0) continue;
      dd inner = log_mu[s];
      for (int r = 0; r < S; ++r) {
        dd expo = dd(static_cast<double>(model->counts[r])) -
                  dd(static_cast<double>(k[r])) / dd(2.0);
        inner += expo * log_1mp[r * S + s];
      }
      lw += dd(static_cast<double>(k[s])) * inner - lfact[s][k[s]];
    }
    return exp_dd(lw);
  }
};

}  // namespace detail

/// The finite-n jump law on the box k_r <= floor(alpha_r n).  Boxes of at
/// most 1e6 lattice points are walked exhaustively (the law is then exact);
/// larger boxes are walked shell by shell with a geometric tail estimate.
inline JumpLaw jump_law(const Model& model, const std::vector<double>& alpha,
                        double tail_target = 1e-12) {
  const int S = model.S();
  if (static_cast<int>(alpha.size()) != S)
    throw ValidationError("BadArgument", "alpha must have one entry per type");
  JumpLaw law;
  law.caps.resize(S);
  long long box_states = 1;
  bool box_small = true;
  long long cap_sum = 0;
  for (int s = 0; s < S; ++s) {
    if (!(alpha[s] > 0.0) || alpha[s] > 1.0)
      throw ValidationError("BadArgument", "alpha entries must lie in (0, 1]");
    law.caps[s] = static_cast<long long>(std::floor(alpha[s] * static_cast<double>(model.n())));
    cap_sum += law.caps[s];
    if (box_small) {
      box_states *= law.caps[s] + 1;
      if (box_states > 1'000'000) box_small = false;
    }
  }

  if (box_small) {
    detail::JumpWeightEval eval(model, law.caps);
    TypeVec k(S, 0);
    TypeVec caps_vec(law.caps.begin(), law.caps.end());
    dd z(0.0);
    while (next_in_box(k, caps_vec)) {
      dd w = eval.weight(k, &law.floored);
      if (w.hi > 0.0) {
        law.ks.push_back(k);
        law.w.push_back(w);
        z += w;
      }
    }
    law.Z = z;
    return law;
  }

  // Shell mode: grow the radius M until the geometric tail is negligible.
  for (long long M = 64;; M *= 2) {
    if (M > 4096)
      throw NumericalError("NoConvergence", "jump-law shells did not reach the tail target");
    bool exhaustive = M >= cap_sum;
    long long Mcur = std::min(M, cap_sum);
    std::vector<long long> caps(S);
    for (int s = 0; s < S; ++s) caps[s] = std::min(law.caps[s], Mcur);
    detail::JumpWeightEval eval(model, caps);

    law.ks.clear();
    law.w.clear();
    law.floored = 0;
    dd z(0.0);
    double prev_heavy = -1.0, ratio = 0.0, shell_heavy = 0.0;
    long long shell_at = 1;
    for (long long m = 1; m <= Mcur; ++m) {
      shell_heavy = 0.0;
      for (auto& k : shell(S, static_cast<int>(m))) {
        bool in_box = true;
        for (int s = 0; s < S; ++s)
          if (k[s] > caps[s]) {
            in_box = false;
            break;
          }
        if (!in_box) continue;
        dd w = eval.weight(k, &law.floored);
        if (w.hi > 0.0) {
          law.ks.push_back(k);
          law.w.push_back(w);
          z += w;
          shell_heavy += static_cast<double>(m) * static_cast<double>(m) * w.hi;
        }
      }
      if (prev_heavy > 0.0 && shell_heavy > 0.0) ratio = shell_heavy / prev_heavy;
      if (m >= 60 && ratio >= 1.0)
        throw NumericalError("NoDecay", "jump-law shell masses are not decaying");
      if (shell_heavy > 0.0) prev_heavy = shell_heavy;
      shell_at = m;
    }
    if (exhaustive) {
      law.Z = z;
      return law;
    }
    double r_safe = std::min(0.95, ratio * (1.0 + 1.0 / static_cast<double>(shell_at)));
    double tail = shell_heavy * r_safe / (1.0 - r_safe);
    if (tail <= tail_target * std::max(z.hi, 1e-300)) {
      law.Z = z + dd(tail);
      law.tail_estimate = tail;
      law.retained_mass = z.hi / (z.hi + tail);
      law.truncated = true;
      return law;
    }
  }
}

/// Mean component shape under the normalized jump law, per type.
inline std::vector<dd> jump_mean(const JumpLaw& law) {
  if (law.ks.empty()) throw ValidationError("BadArgument", "empty jump law");
  const int S = static_cast<int>(law.ks.front().size());
  std::vector<dd> num(S, dd(0.0));
  for (std::size_t i = 0; i < law.ks.size(); ++i)
    for (int s = 0; s < S; ++s)
      num[s] += dd(static_cast<double>(law.ks[i][s])) * law.w[i];
  for (int s = 0; s < S; ++s) num[s] /= law.Z;
  return num;
}

struct CensusConfig {
  std::vector<std::pair<TypeVec, long long>> parts;  // shape -> multiplicity
};

struct CensusLaw {
  std::vector<CensusConfig> configs;
  std::vector<dd> prob;
  dd total;  // equals 1 (up to rounding) when unrestricted
};

/// The exact distribution of the component census at very small n: every
/// way of partitioning the typed vertex counts into components, with its
/// probability
///   P(gamma) = prod_r counts_r! prod_k A(k)^{gamma_k} / gamma_k!,
///   A(k) = p_n(k) / prod_r k_r! * prod_{r,s} (1-p_rs)^{(counts_r - k_r) k_s / 2}.
/// If alpha is given, only configurations whose components all fit in the
/// alpha box are enumerated (probabilities stay unconditional; their sum is
/// then the probability of that event).
inline CensusLaw census_law_exact(const Model& model, const std::vector<double>* alpha = nullptr) {
  const int S = model.S();
  const long long n = model.n();
  if (n > 12)
    throw ValidationError("TooManyPartitions",
                          "exact census enumeration supports at most 12 vertices");
  TypeVec target(S, 0);
  for (int s = 0; s < S; ++s) target[s] = static_cast<int>(model.counts[s]);
  TypeVec caps = target;
  if (alpha) {
    if (static_cast<int>(alpha->size()) != S)
      throw ValidationError("BadArgument", "alpha must have one entry per type");
    for (int s = 0; s < S; ++s)
      caps[s] = std::min<int>(
          caps[s], static_cast<int>(std::floor((*alpha)[s] * static_cast<double>(n))));
  }

  // candidate component shapes, odometer order
  std::vector<TypeVec> shapes;
  {
    TypeVec k(S, 0);
    while (next_in_box(k, caps)) shapes.push_back(k);
  }

  ConnTableDD table(target, n, model.kappa());
  std::vector<dd> g(S * S);  // sqrt(1 - p_rs), for the half-integer exponents
  for (int r = 0; r < S; ++r)
    for (int s = 0; s < S; ++s) {
      dd omp = dd(1.0) - dd(model.kappa()(r, s)) / dd(static_cast<double>(n));
      if (omp.hi <= 0.0)
        throw ValidationError("BadArgument", "census law needs edge probabilities below 1");
      g[r * S + s] = sqrt_dd(omp);
    }
  std::vector<dd> fact(static_cast<std::size_t>(n) + 1, dd(1.0));
  for (long long j = 2; j <= n; ++j) fact[j] = fact[j - 1] * dd(static_cast<double>(j));

  std::vector<dd> A(shapes.size());
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const TypeVec& k = shapes[i];
    dd a = table.at(k);
    for (int r = 0; r < S; ++r) a /= fact[k[r]];
    for (int r = 0; r < S; ++r)
      for (int s = 0; s < S; ++s) {
        long long e = (model.counts[r] - k[r]) * static_cast<long long>(k[s]);
        a *= pow_int(g[r * S + s], e);
      }
    A[i] = a;
  }

  dd base(1.0);
  for (int s = 0; s < S; ++s) base *= fact[model.counts[s]];

  CensusLaw law;
  law.total = dd(0.0);
  CensusConfig current;
  TypeVec remaining = target;
  std::function<void(std::size_t, dd)> rec = [&](std::size_t i, dd acc) {
    if (is_zero(remaining)) {
      law.configs.push_back(current);
      law.prob.push_back(acc);
      law.total += acc;
      return;
    }
    if (i == shapes.size()) return;
    const TypeVec& k = shapes[i];
    long long maxc = -1;
    for (int s = 0; s < S; ++s)
      if (k[s] > 0) {
        long long q = remaining[s] / k[s];
        maxc = (maxc < 0) ? q : std::min(maxc, q);
      }
    rec(i + 1, acc);  // gamma_k = 0
    dd a = acc;
    for (long long cnt = 1; cnt <= maxc; ++cnt) {
      a = a * A[i] / dd(static_cast<double>(cnt));  // accumulates A^cnt / cnt!
      if (cnt == 1)
        current.parts.emplace_back(k, 1);
      else
        current.parts.back().second = cnt;
      for (int s = 0; s < S; ++s) remaining[s] -= k[s];
      rec(i + 1, a);
    }
    if (maxc >= 1) {
      for (int s = 0; s < S; ++s) remaining[s] += static_cast<int>(maxc) * k[s];
      current.parts.pop_back();
    }
  };
  rec(0, base);
  return law;
}

struct TerminalReport {
  double p_formula = 0.0;      // closed form for P(census hits the counts exactly)
  double p_convolution = 0.0;  // Poisson mixture of jump-law convolutions
  double rel_gap = 0.0;
  double z = 0.0;       // jump-law mass on the box
  double lambda = 0.0;  // n Z
  double p_keep = 1.0;  // P(all components fit the box), exact census side
  double tv = -1.0;     // total-variation gap of the conditional laws (if computed)
};

namespace detail {

/// sum_j v^{*j}(target) / j! over j = 1..|target|, restricted to the
/// sub-lattice below target.  With v = n w this is the e^{-lambda}-free
/// part of the probability that the compound-Poisson census reproduces the
/// counts exactly.
inline dd conv_match_mass(const std::vector<TypeVec>& ks, const std::vector<dd>& v,
                          const TypeVec& target) {
  long long lattice = 1;
  for (int t : target) {
    lattice *= t + 1;
    if (lattice > 1'000'000)
      throw ValidationError("LatticeTooLarge", "convolution lattice exceeds 1e6 states");
  }
  const int S = static_cast<int>(target.size());
  std::map<TypeVec, dd> fj;
  fj[TypeVec(S, 0)] = dd(1.0);
  dd D(0.0);
  dd jfact(1.0);
  long long jmax = total(target);
  for (long long j = 1; j <= jmax; ++j) {
    std::map<TypeVec, dd> nf;
    for (auto& [u, pu] : fj) {
      for (std::size_t i = 0; i < ks.size(); ++i) {
        TypeVec nv(S);
        bool ok = true;
        for (int s = 0; s < S; ++s) {
          nv[s] = u[s] + ks[i][s];
          if (nv[s] > target[s]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        auto it = nf.try_emplace(nv, dd(0.0)).first;
        it->second += pu * v[i];
      }
    }
    fj = std::move(nf);
    jfact *= dd(static_cast<double>(j));
    auto it = fj.find(target);
    if (it != fj.end()) D += it->second / jfact;
    if (fj.empty()) break;
  }
  return D;
}

}  // namespace detail

/// The probability that the census lands exactly on the vertex counts,
/// evaluated two independent ways: the closed formula and the
/// compound-Poisson convolution.  With tv_check, additionally compares the
/// conditional census law with the conditional compound-Poisson law in
/// total variation (needs the exact census, so n <= 12).
inline TerminalReport terminal_prob(const Model& model, const std::vector<double>& alpha,
                                    bool tv_check = false) {
  const int S = model.S();
  const long long n = model.n();
  JumpLaw law = jump_law(model, alpha);
  if (law.truncated)
    throw NumericalError("NoConvergence", "terminal probability needs the exact boxed jump law");
  TypeVec target(S, 0);
  for (int s = 0; s < S; ++s) target[s] = static_cast<int>(model.counts[s]);

  dd lambda = law.Z * dd(static_cast<double>(n));

  // P_keep: probability (exact census side) that every component fits the box
  dd p_keep(1.0);
  bool restrictive = false;
  for (int s = 0; s < S; ++s)
    if (law.caps[s] < model.counts[s]) restrictive = true;
  CensusLaw kept;
  if (restrictive || tv_check) {
    kept = census_law_exact(model, &alpha);
    if (restrictive) p_keep = kept.total;
  }

  // closed form
  dd logp = -lambda +
            dd(static_cast<double>(n)) * log_dd(dd(static_cast<double>(n)));
  for (int r = 0; r < S; ++r)
    for (int s = 0; s < S; ++s) {
      dd omp = dd(1.0) - dd(model.kappa()(r, s)) / dd(static_cast<double>(n));
      logp += dd(static_cast<double>(model.counts[r])) *
              dd(static_cast<double>(model.counts[s])) / dd(2.0) * log_dd(omp);
    }
  for (int s = 0; s < S; ++s) {
    dd mu_s = dd(static_cast<double>(model.counts[s])) / dd(static_cast<double>(n));
    logp += dd(static_cast<double>(model.counts[s])) * log_dd(mu_s);
    for (long long j = 2; j <= model.counts[s]; ++j)
      logp -= log_dd(dd(static_cast<double>(j)));
  }
  dd p_formula = exp_dd(logp) * p_keep;

  // convolution route: P_conv = e^{-lambda} sum_j (n w)^{*j}(target) / j!
  std::vector<dd> nw(law.w);
  for (auto& w : nw) w *= dd(static_cast<double>(n));
  dd Dn = detail::conv_match_mass(law.ks, nw, target);
  dd p_conv = exp_dd(-lambda) * Dn;

  TerminalReport rep;
  rep.p_formula = static_cast<double>(p_formula);
  rep.p_convolution = static_cast<double>(p_conv);
  rep.rel_gap = std::abs(static_cast<double>((p_formula - p_conv) / p_conv));
  rep.z = static_cast<double>(law.Z);
  rep.lambda = static_cast<double>(lambda);
  rep.p_keep = static_cast<double>(p_keep);

  if (tv_check) {
    // conditional census law vs conditional compound-Poisson law; the
    // common factor e^{-lambda} cancels against P_conv
    std::map<TypeVec, dd> wmap;
    for (std::size_t i = 0; i < law.ks.size(); ++i) wmap[law.ks[i]] = nw[i];
    dd tv(0.0);
    for (std::size_t i = 0; i < kept.configs.size(); ++i) {
      dd graph_side = kept.prob[i] / kept.total;
      dd jump_side(1.0);
      for (auto& [k, cnt] : kept.configs[i].parts) {
        auto it = wmap.find(k);
        if (it == wmap.end()) {
          jump_side = dd(0.0);
          break;
        }
        dd f(1.0);
        for (long long j = 2; j <= cnt; ++j) f *= dd(static_cast<double>(j));
        jump_side *= pow_int(it->second, cnt) / f;
      }
      jump_side /= Dn;
      tv += abs(graph_side - jump_side);
    }
    rep.tv = 0.5 * static_cast<double>(tv);
  }
  return rep;
}

/// Exact-representation check: the conditional census law equals the
/// conditional compound-Poisson law, and both terminal formulas agree.
inline TerminalReport verify_representation(const Model& model, const std::vector<double>& alpha) {
  return terminal_prob(model, alpha, /*tv_check=*/true);
}

struct LimitLaw {
  std::vector<TypeVec> ks;     // support, shells in ascending |k|
  std::vector<double> prob;    // h(k)/q
  Eigen::VectorXd mean;        // c/q
  Eigen::MatrixXd psi;         // Phi/q
  double q = 0.0;
  double eta = 0.0;            // found exponential-moment margin
  double exp_moment = 0.0;     // sum e^{eta |k|} h(k)/q including tail bound
  double tail_estimate = 0.0;  // unnormalized h-mass beyond the table
  int radius = 0;
};

/// The limiting jump law h(k)/q tabulated to a target tail, together with
/// its mean vector, second-moment matrix, and an exponential-moment margin
/// eta with E e^{eta |X|} finite (halving search; NoExponentialMoment if
/// none is found above 1e-6).
inline LimitLaw limit_jump_law(const Model& model, const DualSolution& dual,
                               double tail_target = 1e-10) {
  const int S = model.S();
  if (!(dual.q > 0.0))
    throw ValidationError("BadArgument", "limit law needs a positive total mass q");
  LimitLaw law;
  law.q = dual.q;
  const int max_shell = 400;
  double prev_heavy = -1.0, ratio = 0.0, shell_heavy = 0.0;
  bool reached = false;
  for (int m = 1; m <= max_shell; ++m) {
    shell_heavy = 0.0;
    for (auto& k : shell(S, m)) {
      double h = h_value(k, model, dual).h;
      if (h <= 0.0) continue;
      law.ks.push_back(k);
      law.prob.push_back(h);
      shell_heavy += static_cast<double>(m) * static_cast<double>(m) * h;
    }
    if (prev_heavy > 0.0 && shell_heavy > 0.0) ratio = shell_heavy / prev_heavy;
    if (m >= 60 && ratio >= 0.95)
      throw NumericalError("NoDecay", "limit-law shell masses are not decaying geometrically");
    if (shell_heavy > 0.0) prev_heavy = shell_heavy;
    law.radius = m;
    if (m >= 3 && ratio > 0.0) {
      double r_safe = std::min(0.95, ratio * (1.0 + 1.0 / static_cast<double>(m)));
      double tail = shell_heavy * r_safe / (1.0 - r_safe);
      if (tail <= tail_target * dual.q) {
        law.tail_estimate = tail;
        reached = true;
        break;
      }
    }
  }
  if (!reached)
    throw NumericalError("NoDecay", "limit-law table did not reach its tail target");
  for (auto& p : law.prob) p /= dual.q;

  law.mean = Eigen::VectorXd::Zero(S);
  for (int s = 0; s < S; ++s) law.mean[s] = dual.c[s] / dual.q;
  law.psi = phi_closed(model, dual) / dual.q;

  // exponential moment: need e^eta * (observed shell ratio) < 1 with margin
  double r_obs = std::min(0.95, ratio * (1.0 + 1.0 / static_cast<double>(law.radius)));
  double eta = 0.1;
  while (std::exp(eta) * r_obs >= 0.999) {
    eta *= 0.5;
    if (eta < 1e-6)
      throw NumericalError("NoExponentialMoment", "no positive exponential moment margin found");
  }
  law.eta = eta;
  NeumaierSum em;
  for (std::size_t i = 0; i < law.ks.size(); ++i)
    em.add(std::exp(eta * static_cast<double>(total(law.ks[i]))) * law.prob[i]);
  double r_eta = std::exp(eta) * r_obs;
  em.add(std::exp(eta * static_cast<double>(law.radius)) * (shell_heavy / dual.q) * r_eta /
         (1.0 - r_eta));
  law.exp_moment = em.total();
  return law;
}

/// Walker alias table for O(1) categorical sampling; construction is
/// deterministic (two index stacks filled in ascending order).
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights) {
    const int N = static_cast<int>(weights.size());
    if (N == 0) throw ValidationError("BadArgument", "alias table needs at least one weight");
    double tot = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw ValidationError("BadArgument", "alias table weights must be >= 0");
      tot += w;
    }
    if (!(tot > 0.0)) throw ValidationError("BadArgument", "alias table needs positive mass");
    prob_.assign(N, 0.0);
    alias_.assign(N, 0);
    std::vector<double> scaled(N);
    for (int i = 0; i < N; ++i) scaled[i] = weights[i] * N / tot;
    std::vector<int> small, large;
    for (int i = 0; i < N; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);
    while (!small.empty() && !large.empty()) {
      int s = small.back();
      small.pop_back();
      int l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (int i : large) prob_[i] = 1.0;
    for (int i : small) prob_[i] = 1.0;  // numerical leftovers
  }

  int draw(SplitMix64& g) const {
    double u = g.uniform01() * static_cast<double>(prob_.size());
    int i = std::min<int>(static_cast<int>(u), static_cast<int>(prob_.size()) - 1);
    double frac = u - static_cast<double>(i);
    return frac < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

/// One draw from the compound-Poisson census: Poisson(lambda) many
/// components, shapes iid from the given law table.
inline std::map<TypeVec, long long> sample_cpp(const std::vector<TypeVec>& ks,
                                               const std::vector<double>& probs, double lambda,
                                               std::uint64_t seed) {
  if (ks.size() != probs.size() || ks.empty())
    throw ValidationError("BadArgument", "law table must be nonempty and aligned");
  AliasTable alias(probs);
  SplitMix64 g(seed);
  long long count = poisson(g, lambda);
  std::map<TypeVec, long long> out;
  for (long long i = 0; i < count; ++i) ++out[ks[alias.draw(g)]];
  return out;
}

}  // namespace mtg
