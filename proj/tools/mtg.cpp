/// mtg: command-line front end for the multi-type sparse random-graph
/// library.  Subcommands cover model inspection, the dual fixed point, the
/// spanning-tree cluster calculus, exact connection probabilities, graph
/// simulation, the compound-Poisson component law, rate functions, and
/// Monte Carlo experiments tying the two ends together.
///
/// Exit codes: 0 success, 1 validation/usage error, 2 numerical failure.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mtgraph/branching.hpp"
#include "mtgraph/common.hpp"
#include "mtgraph/config.hpp"
#include "mtgraph/conn.hpp"
#include "mtgraph/cpp_law.hpp"
#include "mtgraph/dual.hpp"
#include "mtgraph/graph_sim.hpp"
#include "mtgraph/manifest.hpp"
#include "mtgraph/model.hpp"
#include "mtgraph/numerics.hpp"
#include "mtgraph/rates.hpp"
#include "mtgraph/rng.hpp"
#include "mtgraph/tree.hpp"
#include "mtgraph/typevec.hpp"

namespace {

using mtg::ordered_json;

struct Opts {
  std::string model_path;
  std::string json_path;
  std::string csv_path;
  std::string timestamp;
  std::string k_text;
  std::string ks_text;
  std::string alpha_text = "1";
  std::string z_text;
  std::string m_text;
  std::uint64_t seed = 1;
  long long replicates = 0;
  int threads = 1;
  int anchor = -1;
  double x = 1.0;
  double tol = 1e-6;
  double mc_tol = 0.10;
  double tail = 1e-12;
  double cgf_n = 0.0;
  double theta_exp = 0.25;
  bool check = false;
};

Opts opt;
std::string g_cmdline;

std::string fmt(double v) { return mtg::format_double(v); }

void say(const std::string& label, const std::string& value) {
  std::cout << std::left << std::setw(28) << label << value << "\n";
}

std::string join_vec(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out + "]";
}

ordered_json json_vec(const Eigen::VectorXd& v) {
  ordered_json j = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

ordered_json json_mat(const Eigen::MatrixXd& m) {
  ordered_json j = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

struct LoadedModel {
  mtg::Model model;
  std::string config_text;
};

LoadedModel load_model() {
  if (opt.model_path.empty()) throw mtg::ValidationError("BadFlag", "--model is required");
  mtg::Config cfg = mtg::Config::parse_file(opt.model_path);
  LoadedModel lm{mtg::model_from_config(cfg), cfg.raw_text()};
  return lm;
}

mtg::RunManifest make_manifest(const std::string& config_text) {
  mtg::RunManifest man;
  man.command = g_cmdline;
  man.model_digest = mtg::text_digest(config_text);
  man.master_seed = opt.seed;
  man.seed_from_env = mtg::env_seed(man.master_seed);
  man.timestamp = opt.timestamp.empty() ? mtg::iso_timestamp_utc() : opt.timestamp;
  return man;
}

void emit_json(const mtg::RunManifest& man, const ordered_json& report) {
  if (opt.json_path.empty()) return;
  ordered_json root;
  root["manifest"] = man.to_json();
  root["report"] = report;
  if (opt.json_path == "-") {
    std::cout << root.dump(2) << "\n";
    return;
  }
  std::ofstream out(opt.json_path);
  if (!out)
    throw mtg::ValidationError("FileNotFound", "cannot write JSON to '" + opt.json_path + "'");
  out << root.dump(2) << "\n";
}

std::vector<double> parse_alpha(int S) {
  std::vector<double> alpha;
  std::stringstream ss(opt.alpha_text);
  std::string item;
  while (std::getline(ss, item, ',')) alpha.push_back(std::stod(item));
  if (static_cast<int>(alpha.size()) == 1 && S > 1) alpha.assign(S, alpha[0]);
  if (static_cast<int>(alpha.size()) != S)
    throw mtg::ValidationError("BadFlag", "--alpha needs 1 or S entries");
  return alpha;
}

std::vector<mtg::TypeVec> parse_k_list(const std::string& text, int S) {
  std::vector<mtg::TypeVec> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    mtg::TypeVec k = mtg::parse_typevec(item);
    if (static_cast<int>(k.size()) != S)
      throw mtg::ValidationError("BadFlag", "type vector '" + item + "' needs " +
                                                std::to_string(S) + " entries");
    ks.push_back(k);
  }
  if (ks.empty()) throw mtg::ValidationError("BadFlag", "empty type-vector list");
  return ks;
}

mtg::TypeVec parse_k(int S) {
  if (opt.k_text.empty()) throw mtg::ValidationError("BadFlag", "--k is required");
  mtg::TypeVec k = mtg::parse_typevec(opt.k_text);
  if (static_cast<int>(k.size()) != S)
    throw mtg::ValidationError("BadFlag", "--k needs " + std::to_string(S) + " entries");
  return k;
}

std::vector<mtg::TypeVec> default_small_ks(int S) {
  std::vector<mtg::TypeVec> ks = mtg::shell(S, 1);
  for (auto& k : mtg::shell(S, 2)) ks.push_back(k);
  return ks;
}

// ---------------------------------------------------------------- model ---

void cmd_model_validate() {
  LoadedModel lm = load_model();
  const mtg::Model& m = lm.model;
  ordered_json rep;
  rep["valid"] = true;
  rep["types"] = m.S();
  rep["labels"] = m.spec.type_labels;
  rep["n"] = m.n();
  rep["counts"] = m.counts;
  rep["clamped"] = m.clamped();
  say("model", opt.model_path);
  say("types", std::to_string(m.S()));
  say("n", std::to_string(m.n()));
  {
    std::string c;
    for (std::size_t i = 0; i < m.counts.size(); ++i)
      c += (i ? ", " : "") + std::to_string(m.counts[i]);
    say("counts", "[" + c + "]");
  }
  say("valid", "yes");
  emit_json(make_manifest(lm.config_text), rep);
}

void cmd_model_criticality() {
  LoadedModel lm = load_model();
  mtg::CriticalityReport rep = mtg::criticality(lm.model);
  ordered_json j;
  j["sigma"] = rep.sigma;
  j["regime"] = mtg::to_string(rep.regime);
  j["kappa_sup"] = rep.kappa_sup;
  j["moment_condition_ok"] = rep.moment_condition_ok;
  j["moment_margin"] = rep.moment_margin;
  say("sigma", fmt(rep.sigma));
  say("regime", mtg::to_string(rep.regime));
  say("kappa_sup", fmt(rep.kappa_sup));
  say("moment_condition_ok", rep.moment_condition_ok ? "yes" : "no");
  say("moment_margin", fmt(rep.moment_margin));
  emit_json(make_manifest(lm.config_text), j);
}

// ----------------------------------------------------------------- dual ---

void cmd_dual_solve() {
  LoadedModel lm = load_model();
  mtg::DualSolution d = mtg::solve_dual(lm.model);
  ordered_json j;
  j["c"] = json_vec(d.c);
  j["q"] = d.q;
  j["residual"] = d.residual;
  j["iterations"] = d.iterations;
  j["is_trivial"] = d.is_trivial;
  j["near_critical"] = d.near_critical;
  j["survival"] = json_vec(d.survival);
  say("c", join_vec(d.c));
  say("q", fmt(d.q));
  say("residual", fmt(d.residual));
  say("iterations", std::to_string(d.iterations));
  say("is_trivial", d.is_trivial ? "yes" : "no");
  say("survival", join_vec(d.survival));
  emit_json(make_manifest(lm.config_text), j);
}

// ----------------------------------------------------------------- tree ---

void cmd_tree_tau() {
  LoadedModel lm = load_model();
  mtg::TypeVec k = parse_k(lm.model.S());
  double lt = mtg::tau_log(k, lm.model.kappa());
  ordered_json j;
  j["k"] = mtg::to_string(k);
  j["log_tau"] = lt;
  j["tau"] = std::exp(lt);
  say("k", mtg::to_string(k));
  say("log_tau", fmt(lt));
  say("tau", fmt(std::exp(lt)));
  if (opt.check) {
    double te = mtg::tau_enum(k, lm.model.kappa());
    j["enum_tau"] = te;
    say("enum_tau", fmt(te));
  }
  emit_json(make_manifest(lm.config_text), j);
}

void cmd_tree_h() {
  LoadedModel lm = load_model();
  mtg::TypeVec k = parse_k(lm.model.S());
  mtg::DualSolution d = mtg::solve_dual(lm.model);
  mtg::ClusterWeight cw = mtg::h_value(k, lm.model, d);
  ordered_json j;
  j["k"] = mtg::to_string(k);
  j["log_tau"] = cw.log_tau;
  j["h"] = cw.h;
  j["log_h"] = cw.log_h;
  j["h_dual"] = cw.h_dual;
  j["form_gap"] = std::abs(cw.h - cw.h_dual);
  say("k", mtg::to_string(k));
  say("h", fmt(cw.h));
  say("h (dual form)", fmt(cw.h_dual));
  say("log_h", fmt(cw.log_h));
  emit_json(make_manifest(lm.config_text), j);
}

void cmd_tree_identities() {
  LoadedModel lm = load_model();
  mtg::DualSolution d = mtg::solve_dual(lm.model);
  mtg::MassIdentities mi = mtg::mass_identities(lm.model, d, opt.tol);
  Eigen::MatrixXd phi = mtg::phi_closed(lm.model, d);
  double q_target = d.q;
  double gap_h = std::abs(mi.sum_h - q_target);
  double gap_c = (mi.sum_kh - d.c).cwiseAbs().maxCoeff();
  double gap_phi = (mi.phi_truncated - phi).cwiseAbs().maxCoeff();
  ordered_json j;
  j["sum_h"] = mi.sum_h;
  j["q"] = q_target;
  j["gap_mass"] = gap_h;
  j["sum_kh"] = json_vec(mi.sum_kh);
  j["c"] = json_vec(d.c);
  j["gap_mean"] = gap_c;
  j["phi_truncated"] = json_mat(mi.phi_truncated);
  j["phi_closed"] = json_mat(phi);
  j["gap_phi"] = gap_phi;
  j["truncation_radius"] = mi.truncation_radius;
  j["tail_estimate"] = mi.tail_estimate;
  j["within_tail"] = (gap_h <= mi.tail_estimate && gap_c <= mi.tail_estimate &&
                      gap_phi <= mi.tail_estimate);
  say("sum h", fmt(mi.sum_h));
  say("target q", fmt(q_target));
  say("sum k h", join_vec(mi.sum_kh));
  say("target c", join_vec(d.c));
  say("max identity gap", fmt(std::max({gap_h, gap_c, gap_phi})));
  say("tail estimate", fmt(mi.tail_estimate));
  say("truncation radius", std::to_string(mi.truncation_radius));
  say("within tail", j["within_tail"].get<bool>() ? "yes" : "no");
  emit_json(make_manifest(lm.config_text), j);
}

// ----------------------------------------------------------------- conn ---

void cmd_conn(bool brute) {
  LoadedModel lm = load_model();
  mtg::TypeVec k = parse_k(lm.model.S());
  mtg::ConnProbResult r = brute ? mtg::p_conn_brute(k, lm.model.n(), lm.model.kappa())
                                : mtg::p_conn_exact(k, lm.model.n(), lm.model.kappa());
  ordered_json j;
  j["k"] = mtg::to_string(k);
  j["n"] = lm.model.n();
  j["value"] = r.value;
  j["log_value"] = r.log_value;
  j["method"] = r.method;
  say("k", mtg::to_string(k));
  say("p_conn", fmt(r.value));
  say("log p_conn", fmt(r.log_value));
  say("method", r.method);
  emit_json(make_manifest(lm.config_text), j);
}

void cmd_conn_bounds() {
  LoadedModel lm = load_model();
  mtg::TypeVec k = parse_k(lm.model.S());
  mtg::ConnBounds b = mtg::p_conn_bounds(k, lm.model.n(), lm.model.kappa(), opt.anchor);
  ordered_json j;
  j["k"] = mtg::to_string(k);
  j["n"] = lm.model.n();
  j["anchor"] = b.anchor;
  j["est_lower"] = b.est_lower;
  j["est_upper"] = b.est_upper;
  j["meso_upper"] = b.meso_upper;
  j["esti2p_upper"] = b.esti2p_upper;
  j["plb_shape"] = b.plb_shape;
  say("k", mtg::to_string(k));
  say("est_lower", fmt(b.est_lower));
  say("est_upper", fmt(b.est_upper));
  say("meso_upper", fmt(b.meso_upper));
  say("esti2p_upper", fmt(b.esti2p_upper));
  say("plb_shape", fmt(b.plb_shape));
  if (!opt.m_text.empty()) {
    mtg::TypeVec mv = mtg::parse_typevec(opt.m_text);
    double bu = mtg::binom_upper(k, lm.model.n(), lm.model.kappa(), b.anchor, mv);
    j["binom_upper"] = bu;
    j["binom_m"] = mtg::to_string(mv);
    say("binom_upper", fmt(bu));
  }
  emit_json(make_manifest(lm.config_text), j);
}

// ------------------------------------------------------------------ sim ---

void cmd_sim_run() {
  LoadedModel lm = load_model();
  const mtg::Model& m = lm.model;
  if (opt.replicates < 1)
    throw mtg::ValidationError("BadFlag", "--replicates must be at least 1");
  std::vector<mtg::TypeVec> tracked;
  if (!opt.ks_text.empty()) tracked = parse_k_list(opt.ks_text, m.S());
  mtg::RunManifest man = make_manifest(lm.config_text);

  std::vector<mtg::ReplicateStats> stats =
      mtg::run_batch(m, opt.replicates, man.master_seed, tracked, opt.threads);

  if (!opt.csv_path.empty()) {
    std::ofstream csv(opt.csv_path);
    if (!csv)
      throw mtg::ValidationError("FileNotFound", "cannot write CSV to '" + opt.csv_path + "'");
    ordered_json mj = man.to_json();
    for (auto& [key, val] : mj.items())
      csv << "# " << key << "=" << (val.is_string() ? val.get<std::string>() : val.dump())
          << "\n";
    csv << "replicate,seed,num_components,num_edges,pair_draws,giant_size,giant_k";
    for (auto& k : tracked) {
      std::string name = mtg::to_string(k);
      for (auto& ch : name)
        if (ch == ',') ch = '_';
      csv << ",track_" << name;
    }
    csv << "\n";
    for (std::size_t i = 0; i < stats.size(); ++i) {
      const auto& st = stats[i];
      csv << i << "," << st.seed << "," << st.num_components << "," << st.num_edges << ","
          << st.pair_draws << "," << st.giant_size << ",";
      for (std::size_t s = 0; s < st.giant.size(); ++s) csv << (s ? ";" : "") << st.giant[s];
      for (long long t : st.tracked) csv << "," << t;
      csv << "\n";
    }
  }

  auto collect = [&](auto&& get) {
    std::vector<double> xs(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) xs[i] = static_cast<double>(get(stats[i]));
    return xs;
  };
  ordered_json summary;
  summary["replicates"] = opt.replicates;
  ordered_json stats_json;
  auto add_stat = [&](const std::string& name, const std::vector<double>& xs) {
    mtg::MeanVar mv = mtg::mean_var(xs);
    ordered_json e;
    e["mean"] = mv.mean;
    e["var"] = mv.var;
    stats_json[name] = e;
  };
  add_stat("num_components", collect([](const auto& s) { return s.num_components; }));
  add_stat("num_edges", collect([](const auto& s) { return s.num_edges; }));
  add_stat("pair_draws", collect([](const auto& s) { return s.pair_draws; }));
  add_stat("giant_size", collect([](const auto& s) { return s.giant_size; }));
  for (std::size_t t = 0; t < tracked.size(); ++t)
    add_stat("t(" + mtg::to_string(tracked[t]) + ")",
             collect([&](const auto& s) { return s.tracked[t]; }));
  summary["statistics"] = stats_json;

  say("replicates", std::to_string(opt.replicates));
  say("threads", std::to_string(opt.threads));
  say("mean components", fmt(stats_json["num_components"]["mean"].get<double>()));
  say("mean edges", fmt(stats_json["num_edges"]["mean"].get<double>()));
  say("mean giant size", fmt(stats_json["giant_size"]["mean"].get<double>()));
  if (!opt.csv_path.empty()) say("csv", opt.csv_path);
  emit_json(man, summary);
}

// ------------------------------------------------------------------ cpp ---

void cmd_cpp_law() {
  LoadedModel lm = load_model();
  std::vector<double> alpha = parse_alpha(lm.model.S());
  mtg::JumpLaw law = mtg::jump_law(lm.model, alpha, opt.tail);
  ordered_json j;
  j["caps"] = law.caps;
  j["support_size"] = law.ks.size();
  j["Z"] = static_cast<double>(law.Z);
  j["lambda"] = static_cast<double>(law.Z) * static_cast<double>(lm.model.n());
  j["tail_estimate"] = law.tail_estimate;
  j["retained_mass"] = law.retained_mass;
  j["truncated"] = law.truncated;
  j["floored"] = law.floored;
  ordered_json head = ordered_json::array();
  for (std::size_t i = 0; i < law.ks.size() && i < 10; ++i) {
    ordered_json e;
    e["k"] = mtg::to_string(law.ks[i]);
    e["w"] = static_cast<double>(law.w[i]);
    head.push_back(e);
  }
  j["weights_head"] = head;
  say("support size", std::to_string(law.ks.size()));
  say("Z", fmt(static_cast<double>(law.Z)));
  say("lambda = n Z", fmt(j["lambda"].get<double>()));
  say("tail estimate", fmt(law.tail_estimate));
  say("truncated", law.truncated ? "yes" : "no");
  say("floored points", std::to_string(law.floored));
  emit_json(make_manifest(lm.config_text), j);
}

void cmd_cpp_terminal(bool verify) {
  LoadedModel lm = load_model();
  std::vector<double> alpha = parse_alpha(lm.model.S());
  mtg::TerminalReport rep = verify ? mtg::verify_representation(lm.model, alpha)
                                   : mtg::terminal_prob(lm.model, alpha);
  ordered_json j;
  j["p_formula"] = rep.p_formula;
  j["p_convolution"] = rep.p_convolution;
  j["rel_gap"] = rep.rel_gap;
  j["z"] = rep.z;
  j["lambda"] = rep.lambda;
  j["p_keep"] = rep.p_keep;
  if (verify) j["tv"] = rep.tv;
  say("P(exact census) formula", fmt(rep.p_formula));
  say("P(exact census) convolution", fmt(rep.p_convolution));
  say("relative gap", fmt(rep.rel_gap));
  say("P(keep)", fmt(rep.p_keep));
  if (verify) say("total variation", fmt(rep.tv));
  emit_json(make_manifest(lm.config_text), j);
}

// ---------------------------------------------------------------- rates ---

void cmd_rates_eval() {
  LoadedModel lm = load_model();
  const mtg::Model& m = lm.model;
  mtg::DualSolution d = mtg::solve_dual(m);
  ordered_json j;
  Eigen::VectorXd z = Eigen::VectorXd::Ones(m.S());
  if (!opt.z_text.empty()) {
    std::vector<double> zv;
    std::stringstream ss(opt.z_text);
    std::string item;
    while (std::getline(ss, item, ',')) zv.push_back(std::stod(item));
    if (static_cast<int>(zv.size()) != m.S())
      throw mtg::ValidationError("BadFlag", "--z needs S entries");
    for (int s = 0; s < m.S(); ++s) z[s] = zv[s];
  }
  j["x"] = opt.x;
  j["z"] = json_vec(z);
  if (!d.is_trivial) {
    mtg::RateContext ctx = mtg::build_rate_context(m);
    j["regime"] = "supercritical";
    j["q"] = d.q;
    j["rate_I"] = mtg::rate_I(ctx, z);
    j["rate_i"] = mtg::rate_i(ctx, opt.x);
    j["j1"] = mtg::rate_j1(ctx, z);
    j["j2"] = mtg::rate_j2(ctx, z);
    say("regime", "supercritical");
    say("rate I(z)", fmt(j["rate_I"].get<double>()));
    say("rate i(x)", fmt(j["rate_i"].get<double>()));
    if (!opt.k_text.empty()) {
      mtg::TypeVec k = parse_k(m.S());
      mtg::KRateContext kc = mtg::build_k_context(ctx, k);
      j["k"] = mtg::to_string(k);
      j["h"] = kc.h;
      j["pd_condition"] = kc.pd_condition;
      j["apbk_pd"] = kc.apbk_pd;
      j["rate_J"] = mtg::rate_J(ctx, kc, opt.x);
      j["j3"] = mtg::rate_j3(ctx, kc, z);
      j["var_t"] = 1.0 / (2.0 * mtg::rate_J(ctx, kc, 1.0));
      say("rate J_k(x)", fmt(j["rate_J"].get<double>()));
      say("predicted var t(k)", fmt(j["var_t"].get<double>()));
    }
  } else {
    j["regime"] = "subcritical";
    j["q"] = d.q;
    j["rate_i"] = mtg::rate_i_sub(m, opt.x);
    say("regime", "subcritical");
    say("rate i'(x)", fmt(j["rate_i"].get<double>()));
    if (!opt.k_text.empty()) {
      mtg::TypeVec k = parse_k(m.S());
      j["k"] = mtg::to_string(k);
      j["rate_J"] = mtg::rate_J_sub(m, d, k, opt.x);
      j["var_t"] = 1.0 / (2.0 * mtg::rate_J_sub(m, d, k, 1.0));
      say("rate J'_k(x)", fmt(j["rate_J"].get<double>()));
      say("predicted var t(k)", fmt(j["var_t"].get<double>()));
    }
  }
  emit_json(make_manifest(lm.config_text), j);
}

void cmd_rates_covariance() {
  LoadedModel lm = load_model();
  const mtg::Model& m = lm.model;
  mtg::CovariancePrediction pred = mtg::predicted_covariances(m);
  ordered_json j;
  j["supercritical"] = pred.supercritical;
  j["giant_cov"] = json_mat(pred.giant_cov);
  j["var_components"] = pred.var_components;
  std::vector<mtg::TypeVec> ks =
      opt.ks_text.empty() ? default_small_ks(m.S()) : parse_k_list(opt.ks_text, m.S());
  ordered_json vt;
  for (auto& k : ks) vt[mtg::to_string(k)] = mtg::predicted_var_t(m, k);
  j["var_t"] = vt;
  say("supercritical", pred.supercritical ? "yes" : "no");
  say("var components", fmt(pred.var_components));
  for (auto& k : ks)
    say("var t(" + mtg::to_string(k) + ")", fmt(vt[mtg::to_string(k)].get<double>()));
  emit_json(make_manifest(lm.config_text), j);
}

// ------------------------------------------------------------------- mc ---

void cmd_mc_fluctuations() {
  LoadedModel lm = load_model();
  const mtg::Model& m = lm.model;
  if (m.n() < 500)
    throw mtg::ValidationError("BadArgument", "fluctuation experiment needs n >= 500");
  if (opt.replicates < 1000)
    throw mtg::ValidationError("InsufficientReplicates",
                               "fluctuation experiment needs at least 1000 replicates");
  mtg::DualSolution d = mtg::solve_dual(m);
  if (d.is_trivial)
    throw mtg::ValidationError("NotSupercritical",
                               "fluctuation experiment needs a supercritical model");
  std::vector<mtg::TypeVec> ks =
      opt.ks_text.empty() ? default_small_ks(m.S()) : parse_k_list(opt.ks_text, m.S());
  mtg::RunManifest man = make_manifest(lm.config_text);
  std::vector<mtg::ReplicateStats> stats =
      mtg::run_batch(m, opt.replicates, man.master_seed, ks, opt.threads);

  mtg::CovariancePrediction pred = mtg::predicted_covariances(m);
  double nd = static_cast<double>(m.n());

  ordered_json rows = ordered_json::array();
  bool all_pass = true;
  auto add_row = [&](const std::string& name, const std::vector<double>& xs, double predicted) {
    mtg::MeanVar mv = mtg::mean_var(xs);
    double empirical = mv.var / nd;
    double se = mtg::jackknife_var_se(xs) / nd;
    double ratio = empirical / predicted;
    double rel_se = se / predicted;
    bool pass = std::abs(ratio - 1.0) <= opt.mc_tol + 3.0 * rel_se;
    all_pass = all_pass && pass;
    ordered_json r;
    r["name"] = name;
    r["empirical"] = empirical;
    r["predicted"] = predicted;
    r["ratio"] = ratio;
    r["rel_se"] = rel_se;
    r["pass"] = pass;
    rows.push_back(r);
    std::ostringstream line;
    line << std::left << std::setw(16) << name << " empirical " << std::setw(13)
         << fmt(empirical) << " predicted " << std::setw(13) << fmt(predicted) << " ratio "
         << std::setw(10) << fmt(ratio) << (pass ? " pass" : " FAIL");
    std::cout << line.str() << "\n";
  };

  std::vector<double> xs(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i) xs[i] = static_cast<double>(stats[i].giant_size);
  double giant_pred = Eigen::VectorXd::Ones(m.S()).dot(pred.giant_cov *
                                                       Eigen::VectorXd::Ones(m.S()));
  add_row("giant_size", xs, giant_pred);
  for (std::size_t i = 0; i < stats.size(); ++i)
    xs[i] = static_cast<double>(stats[i].num_components);
  add_row("num_components", xs, pred.var_components);
  for (std::size_t t = 0; t < ks.size(); ++t) {
    for (std::size_t i = 0; i < stats.size(); ++i)
      xs[i] = static_cast<double>(stats[i].tracked[t]);
    add_row("t(" + mtg::to_string(ks[t]) + ")", xs, mtg::predicted_var_t(m, ks[t]));
  }

  ordered_json j;
  j["replicates"] = opt.replicates;
  j["tolerance"] = opt.mc_tol;
  j["rows"] = rows;
  j["all_pass"] = all_pass;
  say("all pass", all_pass ? "yes" : "no");
  emit_json(man, j);
  if (!all_pass) throw mtg::NumericalError("FluctuationMismatch",
                                           "empirical variance outside tolerance band");
}

void cmd_mc_cgf() {
  LoadedModel lm = load_model();
  const mtg::Model& m = lm.model;
  mtg::DualSolution d = mtg::solve_dual(m);
  double n = opt.cgf_n > 0.0 ? opt.cgf_n : static_cast<double>(m.n());
  Eigen::VectorXd z = Eigen::VectorXd::Constant(m.S(), 0.3);
  if (!opt.z_text.empty()) {
    std::vector<double> zv;
    std::stringstream ss(opt.z_text);
    std::string item;
    while (std::getline(ss, item, ',')) zv.push_back(std::stod(item));
    if (static_cast<int>(zv.size()) != m.S())
      throw mtg::ValidationError("BadFlag", "--z needs S entries");
    for (int s = 0; s < m.S(); ++s) z[s] = zv[s];
  }
  mtg::CgfReport rep = mtg::cgf_check(m, d, n, opt.theta_exp, z);
  double tol = 3.0 * (1.0 / rep.a_n + rep.a_n / std::sqrt(n));
  ordered_json j;
  j["n"] = n;
  j["theta_exp"] = opt.theta_exp;
  j["a_n"] = rep.a_n;
  j["z"] = json_vec(z);
  j["poisson_empirical"] = rep.poisson_empirical;
  j["poisson_target"] = rep.poisson_target;
  j["gap_poisson"] = rep.gap_poisson;
  j["fixed_empirical"] = rep.fixed_empirical;
  j["fixed_target"] = rep.fixed_target;
  j["gap_fixed"] = rep.gap_fixed;
  j["tolerance"] = tol;
  j["pass"] = (rep.gap_poisson <= tol && rep.gap_fixed <= tol);
  say("a_n", fmt(rep.a_n));
  say("poisson-form gap", fmt(rep.gap_poisson));
  say("fixed-form gap", fmt(rep.gap_fixed));
  say("tolerance", fmt(tol));
  say("pass", j["pass"].get<bool>() ? "yes" : "no");
  emit_json(make_manifest(lm.config_text), j);
}

}  // namespace

int main(int argc, char** argv) {
  // The manifest records the logical experiment command: the subcommand path
  // and every flag that changes the computed results.  Output routing and
  // thread count do not, so they are omitted — this is what lets runs that
  // write to different paths, or with different worker counts, carry equal
  // manifests and therefore byte-identical payloads.
  g_cmdline = "mtg";
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--threads" || a == "--csv" || a == "--json") {
      ++i;  // skip the flag's value too
      continue;
    }
    if (a.rfind("--threads=", 0) == 0 || a.rfind("--csv=", 0) == 0 || a.rfind("--json=", 0) == 0)
      continue;
    g_cmdline += ' ';
    g_cmdline += a;
  }

  CLI::App app{"multi-type sparse random graphs: simulation, exact component laws, rate functions"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c, bool with_seed = false) {
    c->add_option("--model", opt.model_path, "model config file")->required();
    c->add_option("--json", opt.json_path, "write JSON report to this path ('-' = stdout)");
    c->add_option("--timestamp", opt.timestamp, "pin the manifest timestamp string");
    if (with_seed) {
      c->add_option("--seed", opt.seed, "master seed (MTGL_SEED overrides)");
      c->add_option("--threads", opt.threads, "worker threads");
    }
  };

  CLI::App* model = app.add_subcommand("model", "model inspection");
  model->require_subcommand(1);
  add_common(model->add_subcommand("validate", "parse and validate a model config"));
  add_common(model->add_subcommand("criticality", "Perron root, regime, kernel supremum"));

  CLI::App* dual = app.add_subcommand("dual", "characteristic fixed point");
  dual->require_subcommand(1);
  add_common(dual->add_subcommand("solve", "solve the dual equation"));

  CLI::App* tree = app.add_subcommand("tree", "spanning-tree cluster calculus");
  tree->require_subcommand(1);
  CLI::App* tree_tau = tree->add_subcommand("tau", "weighted spanning-tree count");
  add_common(tree_tau);
  tree_tau->add_option("--k", opt.k_text, "type-count vector, e.g. 2,1")->required();
  tree_tau->add_flag("--check", opt.check, "cross-check against direct enumeration (|k| <= 8)");
  CLI::App* tree_h = tree->add_subcommand("h", "limiting cluster weight h(k)");
  add_common(tree_h);
  tree_h->add_option("--k", opt.k_text, "type-count vector")->required();
  CLI::App* tree_id = tree->add_subcommand("identities", "truncated mass identities");
  add_common(tree_id);
  tree_id->add_option("--tol", opt.tol, "tail target for truncation");

  CLI::App* conn = app.add_subcommand("conn", "connection probabilities");
  conn->require_subcommand(1);
  CLI::App* conn_exact = conn->add_subcommand("exact", "exact via the anchored recursion");
  add_common(conn_exact);
  conn_exact->add_option("--k", opt.k_text, "type-count vector")->required();
  CLI::App* conn_brute = conn->add_subcommand("brute", "oracle: sum over all edge subsets");
  add_common(conn_brute);
  conn_brute->add_option("--k", opt.k_text, "type-count vector")->required();
  CLI::App* conn_bounds = conn->add_subcommand("bounds", "closed-form bounds");
  add_common(conn_bounds);
  conn_bounds->add_option("--k", opt.k_text, "type-count vector")->required();
  conn_bounds->add_option("--anchor", opt.anchor, "anchor type (default: most numerous)");
  conn_bounds->add_option("--m", opt.m_text, "comparison vector for the binomial bound");

  CLI::App* sim = app.add_subcommand("sim", "graph simulation");
  sim->require_subcommand(1);
  CLI::App* sim_run = sim->add_subcommand("run", "sample graphs and report census statistics");
  add_common(sim_run, /*with_seed=*/true);
  sim_run->add_option("--replicates", opt.replicates, "number of replicates")->required();
  sim_run->add_option("--track-k", opt.ks_text, "semicolon-separated type vectors, e.g. 1,0;2,1");
  sim_run->add_option("--csv", opt.csv_path, "write per-replicate CSV to this path");

  CLI::App* cpp = app.add_subcommand("cpp", "compound-Poisson component law");
  cpp->require_subcommand(1);
  CLI::App* cpp_law = cpp->add_subcommand("law", "finite-n jump law on a box");
  add_common(cpp_law);
  cpp_law->add_option("--alpha", opt.alpha_text, "box size per type as a fraction of n");
  cpp_law->add_option("--tail", opt.tail, "tail mass target for truncated laws");
  CLI::App* cpp_term = cpp->add_subcommand("terminal", "terminal probability, two routes");
  add_common(cpp_term);
  cpp_term->add_option("--alpha", opt.alpha_text, "box size per type as a fraction of n");
  CLI::App* cpp_verify = cpp->add_subcommand("verify", "exact representation identity check");
  add_common(cpp_verify);
  cpp_verify->add_option("--alpha", opt.alpha_text, "box size per type as a fraction of n");

  CLI::App* rates = app.add_subcommand("rates", "moderate-deviation rate functions");
  rates->require_subcommand(1);
  CLI::App* rates_eval = rates->add_subcommand("eval", "evaluate the rate functions");
  add_common(rates_eval);
  rates_eval->add_option("--k", opt.k_text, "shape for the per-shape rate");
  rates_eval->add_option("--x", opt.x, "scalar deviation (default 1)");
  rates_eval->add_option("--z", opt.z_text, "vector deviation, comma separated");
  CLI::App* rates_cov = rates->add_subcommand("covariance", "predicted fluctuation covariances");
  add_common(rates_cov);
  rates_cov->add_option("--k", opt.ks_text, "semicolon-separated shapes (default: mass <= 2)");

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo experiments");
  mc->require_subcommand(1);
  CLI::App* mc_fluct = mc->add_subcommand("fluctuations",
                                          "empirical CLT-scale variances vs rate predictions");
  add_common(mc_fluct, /*with_seed=*/true);
  mc_fluct->add_option("--replicates", opt.replicates, "number of replicates")->required();
  mc_fluct->add_option("--k", opt.ks_text, "semicolon-separated shapes (default: mass <= 2)");
  mc_fluct->add_option("--tol", opt.mc_tol, "relative tolerance band");
  CLI::App* mc_cgf = mc->add_subcommand("cgf", "scaled cumulant generating function check");
  add_common(mc_cgf);
  mc_cgf->add_option("--n", opt.cgf_n, "evaluation scale n (default: model n)");
  mc_cgf->add_option("--theta-exp", opt.theta_exp, "a_n = n^theta_exp, in (0, 1/2)");
  mc_cgf->add_option("--z", opt.z_text, "direction vector (default 0.3 per type)");

  try {
    app.parse(argc, argv);
    if (model->got_subcommand("validate")) cmd_model_validate();
    if (model->got_subcommand("criticality")) cmd_model_criticality();
    if (dual->got_subcommand("solve")) cmd_dual_solve();
    if (tree->got_subcommand("tau")) cmd_tree_tau();
    if (tree->got_subcommand("h")) cmd_tree_h();
    if (tree->got_subcommand("identities")) cmd_tree_identities();
    if (conn->got_subcommand("exact")) cmd_conn(false);
    if (conn->got_subcommand("brute")) cmd_conn(true);
    if (conn->got_subcommand("bounds")) cmd_conn_bounds();
    if (sim->got_subcommand("run")) cmd_sim_run();
    if (cpp->got_subcommand("law")) cmd_cpp_law();
    if (cpp->got_subcommand("terminal")) cmd_cpp_terminal(false);
    if (cpp->got_subcommand("verify")) cmd_cpp_terminal(true);
    if (rates->got_subcommand("eval")) cmd_rates_eval();
    if (rates->got_subcommand("covariance")) cmd_rates_covariance();
    if (mc->got_subcommand("fluctuations")) cmd_mc_fluctuations();
    if (mc->got_subcommand("cgf")) cmd_mc_cgf();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const mtg::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mtg::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
