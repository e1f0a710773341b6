#pragma once

#include <string>
#include <vector>

#include "authorprint/affinity.hpp"
#include "authorprint/aggregation.hpp"
#include "authorprint/bundle.hpp"
#include "authorprint/config_lists.hpp"
#include "authorprint/louvain.hpp"

namespace authorprint {

struct DecoupleConfig {
  std::vector<std::string> framework_prefixes = default_framework_prefixes();
  // Library prefixes merged with the ones the bundle declares.
  std::vector<std::string> libraries;
  PairWeightMode mode = PairWeightMode::max_mode();
  double louvain_tolerance = 1e-9;
};

// Package -> module assignment of one app. Module ids are 0..k-1, numbered in
// ascending package order.
struct AuthorshipPartition {
  std::vector<PackageName> packages;
  std::vector<int> module_of;
  int primary_module = 0;
  bool primary_from_main_activity = true;
  double modularity = 0.0;
  AggregationResult aggregation;

  int module_count() const;
  // Module of a package, -1 when the package is not in scope.
  int module_of_package(std::string_view package) const;
  bool in_primary(std::string_view package) const;
};

// Module holding the main activity's package. Throws NoMainActivity when the
// manifest has none or its package is out of scope.
int select_primary_module(const AuthorshipPartition& partition, const ManifestInfo& manifest);

// build_graph -> aggregate -> distances -> affinities -> modularity
// clustering -> primary module. Without a usable main activity the module
// with the most methods is primary.
AuthorshipPartition decouple(const AppBundle& bundle, const DecoupleConfig& config = {});

}  // namespace authorprint
