#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "catdag/mcmc.hpp"

namespace catdag {

// Trace files are JSON Lines. The first record is the manifest
//   {"type":"manifest","format":"catdag-trace/1","names":[...],"levels":[[...],...],
//    "cardinalities":[...],
//    "config":{...},"accepted":A,"proposed":P,"acceptance_rate":r,"draws":N}
// followed by one record per retained draw
//   {"type":"draw","iteration":s,"edges":[[u,v],...],
//    "theta":{"lazy_seed":L,"a":a,"nodes":[{"node":j,"parents":[...],
//             "rows":[{"config":k,"p":[...]}]}]}}
// Node indices in the file are 1-based; "theta" is absent when not stored.

struct TraceHeader {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> levels;  // per variable, in code order
  std::vector<int> cardinalities;

  static TraceHeader from_dataset(const Dataset& ds);
};

struct LoadedTrace {
  TraceHeader header;
  Trace trace;
};

nlohmann::json config_to_json(const McmcConfig& config);
/// Inverse of config_to_json. Missing keys keep their defaults; malformed
/// values throw ConfigError.
McmcConfig config_from_json(const nlohmann::json& j, int q);

nlohmann::json query_to_json(const CausalQuery& query);
CausalQuery query_from_json(const nlohmann::json& j);

void write_trace(std::ostream& out, const Trace& trace, const TraceHeader& header);
void write_trace(const std::filesystem::path& path, const Trace& trace, const TraceHeader& header);

/// Throws InputError on malformed records.
LoadedTrace read_trace(std::istream& in);
LoadedTrace read_trace(const std::filesystem::path& path);

}  // namespace catdag
