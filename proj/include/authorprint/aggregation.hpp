#pragma once

#include <span>
#include <string>
#include <vector>

#include "authorprint/bundle.hpp"
#include "authorprint/relation_graph.hpp"

namespace authorprint {

// Author id per graph node. Ids are canonical: every node carries the
// smallest node index of its group.
using AuthorIds = std::vector<int>;

enum class MergeReason { library, component, circle };
std::string_view to_string(MergeReason reason);

struct MergedGroup {
  MergeReason reason;
  std::vector<std::size_t> members;  // node indices, ascending
};

struct AggregationResult {
  AuthorIds phi;
  std::vector<MergedGroup> merged_groups;
  std::vector<std::string> skipped_components;
};

// Relabels an arbitrary id assignment into canonical form.
AuthorIds canonical_ids(const AuthorIds& phi);

// Nodes matched by the same library prefix (longest segment-wise match,
// case-sensitive) share one id.
std::vector<MergedGroup> merge_library_packages(const PackageRelationGraph& graph,
                                                std::span<const std::string> libraries,
                                                AuthorIds& phi);

// Every in-scope package hosting a manifest component joins one group.
// Components whose package is not a graph node are reported in `skipped`.
std::vector<MergedGroup> merge_component_packages(const PackageRelationGraph& graph,
                                                  const ManifestInfo& manifest, AuthorIds& phi,
                                                  std::vector<std::string>* skipped = nullptr);

// After contracting nodes that already share an id, each strongly connected
// component collapses to one id.
std::vector<MergedGroup> merge_circles(const PackageRelationGraph& graph, AuthorIds& phi);

// unique ids -> library merge -> component merge -> circle merge.
AggregationResult aggregate(const PackageRelationGraph& graph,
                            std::span<const std::string> libraries, const ManifestInfo& manifest);

// Same pipeline starting from a given assignment instead of unique ids.
AggregationResult aggregate(const PackageRelationGraph& graph,
                            std::span<const std::string> libraries, const ManifestInfo& manifest,
                            const AuthorIds& initial);

}  // namespace authorprint
