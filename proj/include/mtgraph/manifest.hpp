#pragma once
/// \file manifest.hpp
/// Run manifests and structured output plumbing: every file the CLI writes
/// embeds the tool version, exact command, PRNG name, master seed, model
/// digest, and timestamp, so that two runs with equal manifests are
/// byte-identical and any output can be traced to its inputs.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <string>

#include "json.hpp"

#include "mtgraph/common.hpp"
#include "mtgraph/numerics.hpp"

namespace mtg {

using ordered_json = nlohmann::ordered_json;

struct RunManifest {
  std::string command;          // argv joined
  std::string model_digest;     // fnv1a64 over the model config text
  std::uint64_t master_seed = 0;
  bool seed_from_env = false;   // master seed came from MTGL_SEED
  std::string timestamp;        // ISO-8601 UTC, or a caller-pinned string

  ordered_json to_json() const {
    ordered_json j;
    j["tool"] = "mtg";
    j["version"] = kVersion;
    j["command"] = command;
    j["prng"] = "splitmix64";
    j["master_seed"] = master_seed;
    j["seed_from_env"] = seed_from_env;
    j["model_digest"] = model_digest;
    j["timestamp"] = timestamp;
    return j;
  }
};

inline std::string iso_timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

/// MTGL_SEED environment override: returns true and sets `seed` when the
/// variable is present and parses as an unsigned 64-bit integer.
inline bool env_seed(std::uint64_t& seed) {
  const char* v = std::getenv("MTGL_SEED");
  if (!v || !*v) return false;
  char* end = nullptr;
  unsigned long long parsed = std::strtoull(v, &end, 0);
  if (end == v || (end && *end != '\0'))
    throw ValidationError("BadFlag", "MTGL_SEED must be an unsigned integer");
  seed = static_cast<std::uint64_t>(parsed);
  return true;
}

/// fnv1a64 hex digest of a text blob (used for model-config provenance).
inline std::string text_digest(const std::string& text) {
  std::uint64_t h = fnv1a64(text);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mtg
