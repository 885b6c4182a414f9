#pragma once

#include <vector>

namespace phishlab {

/// Maximum-weight assignment on a rectangular matrix of non-negative weights
/// (Hungarian method). Returns, per row, the assigned column or -1 when there
/// are more rows than columns.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights);

}  // namespace phishlab
