#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "anneal/problem.hpp"

namespace anneal {

// A named benchmark family with the dimensions and known optima the result
// tables list for it. Problems are built on demand for a given n.
struct SuiteEntry {
  std::string name;
  std::vector<Index> dimensions;
  // Which result tables list this function: "hdgsam", "dg", "evo".
  std::vector<std::string> source_tags;
  std::function<Box(Index n)> bounds;
  std::function<double(const Vector&)> objective;
  std::function<std::optional<double>(Index n)> optimum;
  std::function<std::optional<Vector>(Index n)> minimizer;
  // Conflicting value from another table, recorded but not used as f_opt.
  std::optional<double> alternate_optimum;

  bool supports(Index n) const;
  Problem problem(Index n) const;
};

std::vector<SuiteEntry> make_standard_suite();

// Case-, space- and punctuation-insensitive lookup ("shekel5" finds
// "Shekel-5", "levy1" finds "Levy Nr.1"). Throws ConfigError when unknown.
const SuiteEntry& find_entry(const std::vector<SuiteEntry>& suite, const std::string& name);

std::string normalize_name(const std::string& name);

struct SuiteCase {
  std::string name;
  Index dim = 0;
};

// The (function, dimension) pairs whose known optima gate the hybrid runs.
std::vector<SuiteCase> gated_subset();

// "all", "gated", or a comma-separated list of names with optional ":n"
// (every listed dimension when n is omitted).
std::vector<SuiteCase> parse_selection(const std::vector<SuiteEntry>& suite,
                                       const std::string& selection);

// One catalog record per (entry, dimension): name, n, lower, upper, f_opt,
// minimizer, source_tag, alternate_optimum.
nlohmann::json catalog_json(const std::vector<SuiteEntry>& suite);

// Inverse of catalog_json's per-record layout, for round-trip checks.
struct CatalogRecord {
  std::string name;
  Index n = 0;
  Vector lower;
  Vector upper;
  std::optional<double> f_opt;
  std::optional<Vector> minimizer;
  std::vector<std::string> source_tags;
};
std::vector<CatalogRecord> parse_catalog(const nlohmann::json& j);

}  // namespace anneal
