#pragma once

#include <cstddef>
#include <vector>

#include "shamap/dataset.hpp"
#include "shamap/graph.hpp"
#include "shamap/spectral.hpp"

namespace shamap {

// Everything one embedding run needs. Defaults mirror the CLI defaults.
struct RunConfig {
  EmbedMethod method = EmbedMethod::Shamap;
  BuildRule rule = KnnRule{10};
  ReferencePoint reference = ReferencePoint::origin();
  std::size_t d = 2;
  WeightMode weight_mode = WeightMode::Euclidean;
  EmbedOptions opts;
  bool largest_component = false;
  std::size_t sammon_max_iters = 500;
  double sammon_step = 1.0;
};

struct RunResult {
  Embedding embedding;
  std::vector<std::size_t> kept;     // row indices of the input that were embedded
  std::vector<std::size_t> dropped;  // rows outside the largest component
  LabelSet labels;                   // input labels filtered to `kept`
};

inline PointCloud subset_cloud(const PointCloud& cloud,
                               const std::vector<std::size_t>& indices) {
  Matrix pts(indices.size(), cloud.dim());
  for (std::size_t r = 0; r < indices.size(); ++r)
    for (std::size_t k = 0; k < cloud.dim(); ++k)
      pts(r, k) = cloud.point(indices[r])[k];
  return PointCloud(std::move(pts));
}

// Runs the configured method. With `largest_component` set, points outside
// the largest connected component of the neighbor graph are removed first
// (the graph rebuilt on the survivors has the same edges, since neighbor
// edges never cross components) and reported in `dropped`.
inline RunResult run_embedding(const PointCloud& cloud, const RunConfig& config,
                               const LabelSet* labels = nullptr) {
  if (labels && labels->size() != cloud.size())
    throw std::invalid_argument("run_embedding: label count mismatch");

  RunResult result;
  result.kept.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) result.kept[i] = i;

  const PointCloud* work = &cloud;
  PointCloud filtered(Matrix(1, 1));
  if (config.largest_component) {
    const NeighborGraph g = detail::build_rule_graph(cloud, config.rule);
    result.kept = largest_component_indices(g);
    if (result.kept.size() < cloud.size()) {
      std::vector<char> keep(cloud.size(), 0);
      for (std::size_t i : result.kept) keep[i] = 1;
      for (std::size_t i = 0; i < cloud.size(); ++i)
        if (!keep[i]) result.dropped.push_back(i);
      filtered = subset_cloud(cloud, result.kept);
      work = &filtered;
    }
  }
  if (labels)
    for (std::size_t i : result.kept) result.labels.push_back((*labels)[i]);

  switch (config.method) {
    case EmbedMethod::Shamap:
      result.embedding = shamap_embed(*work, config.reference, config.rule,
                                      config.d, config.weight_mode, config.opts);
      break;
    case EmbedMethod::Isomap:
      result.embedding = isomap_embed(*work, config.rule, config.d, config.opts);
      break;
    case EmbedMethod::Sammon:
      result.embedding = sammon_embed(*work, config.d, config.sammon_max_iters,
                                      config.sammon_step);
      break;
  }
  return result;
}

}  // namespace shamap
