#include "authorprint/aggregation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "authorprint/config_lists.hpp"

namespace authorprint {

std::string_view to_string(MergeReason reason) {
  switch (reason) {
    case MergeReason::library: return "library";
    case MergeReason::component: return "component";
    case MergeReason::circle: return "circle";
  }
  return "library";
}

AuthorIds canonical_ids(const AuthorIds& phi) {
  std::map<int, int> first_node;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    first_node.emplace(phi[i], static_cast<int>(i));
  }
  AuthorIds out(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) out[i] = first_node.at(phi[i]);
  return out;
}

namespace {

// Gives every node whose id appears among `members` the smallest such id.
// Returns the affected nodes in ascending order.
std::vector<std::size_t> unite(AuthorIds& phi, const std::vector<std::size_t>& members) {
  std::set<int> ids;
  for (auto m : members) ids.insert(phi[m]);
  const int target = *ids.begin();
  std::vector<std::size_t> affected;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (ids.contains(phi[i])) {
      phi[i] = target;
      affected.push_back(i);
    }
  }
  return affected;
}

bool distinct_ids(const AuthorIds& phi, const std::vector<std::size_t>& members) {
  for (auto m : members) {
    if (phi[m] != phi[members.front()]) return true;
  }
  return false;
}

// Iterative Tarjan over a graph given as adjacency lists; returns the
// component index of each vertex.
std::vector<int> strongly_connected(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int counter = 0;
  int components = 0;

  struct Frame {
    int v;
    std::size_t next;
  };
  std::vector<Frame> call;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& frame = call.back();
      const int v = frame.v;
      if (frame.next < adj[v].size()) {
        const int w = adj[v][frame.next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = components;
        } while (w != v);
        ++components;
      }
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return comp;
}

}  // namespace

std::vector<MergedGroup> merge_library_packages(const PackageRelationGraph& graph,
                                                std::span<const std::string> libraries,
                                                AuthorIds& phi) {
  std::vector<std::string> prefixes;
  for (const auto& l : libraries) prefixes.push_back(normalize_prefix(l));

  std::map<std::string, std::vector<std::size_t>> by_library;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const std::string* best = nullptr;
    for (const auto& p : prefixes) {
      if (graph.node(i).has_prefix(p) && (!best || p.size() > best->size())) best = &p;
    }
    if (best) by_library[*best].push_back(i);
  }

  std::vector<MergedGroup> groups;
  for (const auto& [prefix, members] : by_library) {
    if (members.size() < 2) continue;
    unite(phi, members);
    groups.push_back({MergeReason::library, members});
  }
  return groups;
}

std::vector<MergedGroup> merge_component_packages(const PackageRelationGraph& graph,
                                                  const ManifestInfo& manifest, AuthorIds& phi,
                                                  std::vector<std::string>* skipped) {
  std::set<std::size_t> hosts;
  for (const auto& comp : manifest.components) {
    const auto node = graph.index_of(package_of_class(comp.name));
    if (!node) {
      if (skipped) skipped->push_back(comp.name);
      continue;
    }
    hosts.insert(*node);
  }
  const std::vector<std::size_t> members(hosts.begin(), hosts.end());
  if (members.size() < 2 || !distinct_ids(phi, members)) return {};
  unite(phi, members);
  return {MergedGroup{MergeReason::component, members}};
}

std::vector<MergedGroup> merge_circles(const PackageRelationGraph& graph, AuthorIds& phi) {
  // Contract nodes sharing an id into one vertex.
  std::map<int, int> vertex_of_id;
  for (int id : phi) vertex_of_id.emplace(id, 0);
  int next = 0;
  for (auto& [id, v] : vertex_of_id) v = next++;
  std::vector<std::vector<int>> adj(vertex_of_id.size());
  for (const auto& [key, count] : graph.edges()) {
    const int a = vertex_of_id.at(phi[key.from]);
    const int b = vertex_of_id.at(phi[key.to]);
    if (a != b) adj[a].push_back(b);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  const auto comp = strongly_connected(adj);
  std::map<int, std::vector<std::size_t>> nodes_of_comp;
  std::map<int, std::set<int>> vertices_of_comp;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const int v = vertex_of_id.at(phi[i]);
    nodes_of_comp[comp[v]].push_back(i);
    vertices_of_comp[comp[v]].insert(v);
  }

  std::vector<MergedGroup> groups;
  for (auto& [c, members] : nodes_of_comp) {
    if (vertices_of_comp[c].size() < 2) continue;
    unite(phi, members);
    groups.push_back({MergeReason::circle, members});
  }
  std::sort(groups.begin(), groups.end(),
            [](const MergedGroup& a, const MergedGroup& b) { return a.members < b.members; });
  return groups;
}

AggregationResult aggregate(const PackageRelationGraph& graph,
                            std::span<const std::string> libraries, const ManifestInfo& manifest) {
  return aggregate(graph, libraries, manifest, graph.phi());
}

AggregationResult aggregate(const PackageRelationGraph& graph,
                            std::span<const std::string> libraries, const ManifestInfo& manifest,
                            const AuthorIds& initial) {
  AggregationResult result;
  result.phi = canonical_ids(initial);
  auto append = [&](std::vector<MergedGroup> groups) {
    for (auto& g : groups) result.merged_groups.push_back(std::move(g));
  };
  append(merge_library_packages(graph, libraries, result.phi));
  append(merge_component_packages(graph, manifest, result.phi, &result.skipped_components));
  append(merge_circles(graph, result.phi));
  return result;
}

}  // namespace authorprint
