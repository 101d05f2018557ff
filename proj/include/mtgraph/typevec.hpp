#pragma once
/// \file typevec.hpp
/// The integer type-count vector k: how many vertices of each type a
/// component (or any vertex multiset) contains, plus iteration helpers over
/// boxes and shells of such vectors.

#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mtgraph/common.hpp"

namespace mtg {

using TypeVec = std::vector<int>;

/// |k| = total number of vertices.
inline long long total(const TypeVec& k) {
  return std::accumulate(k.begin(), k.end(), 0LL);
}

inline bool leq(const TypeVec& a, const TypeVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline bool is_zero(const TypeVec& k) {
  for (int v : k)
    if (v != 0) return false;
  return true;
}

struct TypeVecHash {
  std::size_t operator()(const TypeVec& k) const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (int v : k) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 0x100000001B3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// "2,1,0" -> {2,1,0}
inline TypeVec parse_typevec(const std::string& text) {
  TypeVec k;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    try {
      v = std::stoi(item);
    } catch (const std::exception&) {
      throw ValidationError("BadFlag", "cannot parse type vector entry '" + item + "'");
    }
    if (v < 0)
      throw ValidationError("BadFlag", "type vector entries must be >= 0, got '" + item + "'");
    k.push_back(v);
  }
  if (k.empty()) throw ValidationError("BadFlag", "empty type vector");
  return k;
}

inline std::string to_string(const TypeVec& k) {
  std::string out;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(k[i]);
  }
  return out;
}

/// Odometer step through the box {0..cap[0]} x ... x {0..cap[S-1]}.
/// Returns false when the odometer wraps past the last vector.
inline bool next_in_box(TypeVec& k, const TypeVec& cap) {
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < cap[i]) {
      ++k[i];
      return true;
    }
    k[i] = 0;
  }
  return false;
}

/// All k >= 0 with |k| = m (compositions of m into S parts), in
/// lexicographic order.  S and m small throughout this library.
inline std::vector<TypeVec> shell(int S, int m) {
  std::vector<TypeVec> out;
  TypeVec k(S, 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == S - 1) {
      k[pos] = remaining;
      out.push_back(k);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      k[pos] = v;
      rec(pos + 1, remaining - v);
    }
  };
  if (S >= 1 && m >= 0) rec(0, m);
  return out;
}

}  // namespace mtg
