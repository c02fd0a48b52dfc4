// Copyright 2026 The Livetest Planner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ltp/coverage.h"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

namespace ltp {

const Mixture* TestConfiguration::Find(const CiId& ci) const {
  for (size_t i = 0; i < path.vertices.size(); ++i) {
    if (path.vertices[i] == ci) return &mixtures[i];
  }
  return nullptr;
}

std::optional<TestConfiguration> TestConfiguration::Restrict(
    const CallPath& sub) const {
  TestConfiguration out;
  out.path = sub;
  for (const CiId& ci : sub.vertices) {
    const Mixture* m = Find(ci);
    if (m == nullptr) return std::nullopt;
    out.mixtures.push_back(*m);
  }
  return out;
}

std::string TestConfiguration::Body() const {
  std::string out = "{";
  for (size_t i = 0; i < path.vertices.size(); ++i) {
    if (i > 0) out += ",";
    out += path.vertices[i] + ":" + mixtures[i].ToString();
  }
  return out + "}";
}

std::vector<Mixture> EnumerateMixtures(
    std::span<const BoundaryEnvironment* const> environments, int width) {
  if (width < 1) throw std::invalid_argument("mixture width must be >= 1");
  std::vector<const BoundaryEnvironment*> envs(environments.begin(),
                                               environments.end());
  std::sort(envs.begin(), envs.end(),
            [](const BoundaryEnvironment* a, const BoundaryEnvironment* b) {
              return a->id < b->id;
            });
  std::vector<Mixture> out;
  if (envs.empty()) return out;
  // Non-decreasing index sequences enumerate multisets in lexicographic order.
  std::vector<size_t> pick(width, 0);
  while (true) {
    std::map<EnvId, int> counts;
    for (size_t p : pick) ++counts[envs[p]->id];
    bool deployable = true;
    for (size_t e = 0; e < envs.size(); ++e) {
      auto it = counts.find(envs[e]->id);
      if (it != counts.end() &&
          it->second > static_cast<int>(envs[e]->hosting_nodes.size())) {
        deployable = false;
      }
    }
    if (deployable) out.emplace_back(std::move(counts));
    int pos = width - 1;
    while (pos >= 0 && pick[pos] == envs.size() - 1) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int q = pos + 1; q < width; ++q) pick[q] = pick[pos];
  }
  return out;
}

std::vector<Mixture> MixturesOf(const SystemModel& model, const CiId& ci,
                                int width) {
  return EnumerateMixtures(model.EnvironmentsOf(ci), width);
}

namespace {

std::vector<std::vector<int>> ProductRows(const std::vector<int>& counts) {
  std::vector<std::vector<int>> rows;
  std::vector<int> row(counts.size(), 0);
  while (true) {
    rows.push_back(row);
    int pos = static_cast<int>(counts.size()) - 1;
    while (pos >= 0 && row[pos] == counts[pos] - 1) {
      row[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++row[pos];
  }
  return rows;
}

// Tracks which level pairs of which factor pairs are still uncovered.
class PairTracker {
 public:
  explicit PairTracker(const std::vector<int>& counts) : counts_(counts) {
    const size_t n = counts.size();
    offset_.assign(n * n, 0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        offset_[i * n + j] = static_cast<int>(covered_.size());
        covered_.resize(covered_.size() + counts[i] * counts[j], false);
      }
    }
    remaining_ = covered_.size();
  }

  size_t remaining() const { return remaining_; }

  bool Covered(size_t i, int a, size_t j, int b) const {
    return covered_[Index(i, a, j, b)];
  }

  int Gain(const std::vector<int>& row, size_t upto) const {
    int gain = 0;
    for (size_t i = 0; i < upto; ++i) {
      for (size_t j = i + 1; j < upto; ++j) {
        if (!Covered(i, row[i], j, row[j])) ++gain;
      }
    }
    return gain;
  }

  void Mark(const std::vector<int>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      for (size_t j = i + 1; j < row.size(); ++j) {
        auto idx = Index(i, row[i], j, row[j]);
        if (!covered_[idx]) {
          covered_[idx] = true;
          --remaining_;
        }
      }
    }
  }

  // First uncovered (i, a, j, b) in canonical order.
  std::optional<std::array<int, 4>> FirstUncovered() const {
    const size_t n = counts_.size();
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        for (int a = 0; a < counts_[i]; ++a) {
          for (int b = 0; b < counts_[j]; ++b) {
            if (!Covered(i, a, j, b)) {
              return std::array<int, 4>{static_cast<int>(i), a,
                                        static_cast<int>(j), b};
            }
          }
        }
      }
    }
    return std::nullopt;
  }

 private:
  size_t Index(size_t i, int a, size_t j, int b) const {
    const size_t n = counts_.size();
    return offset_[i * n + j] + a * counts_[j] + b;
  }

  std::vector<int> counts_;
  std::vector<int> offset_;
  std::vector<bool> covered_;
  size_t remaining_ = 0;
};

constexpr long kExhaustivePairwiseLimit = 1 << 16;

std::vector<std::vector<int>> PairwiseRows(const std::vector<int>& counts) {
  const size_t n = counts.size();
  if (n == 1) return ProductRows(counts);
  long product = 1;
  for (int c : counts) {
    product = std::min(product * c, kExhaustivePairwiseLimit + 1);
  }
  PairTracker tracker(counts);
  std::vector<std::vector<int>> rows;
  if (product <= kExhaustivePairwiseLimit) {
    const auto candidates = ProductRows(counts);
    while (tracker.remaining() > 0) {
      const std::vector<int>* best = nullptr;
      int best_gain = 0;
      for (const auto& c : candidates) {
        int gain = tracker.Gain(c, n);
        if (gain > best_gain) {
          best_gain = gain;
          best = &c;
        }
      }
      tracker.Mark(*best);
      rows.push_back(*best);
    }
    return rows;
  }
  // Large products: seed each row with the first uncovered pair, then fix the
  // remaining factors one at a time by maximal gain.
  while (auto seed = tracker.FirstUncovered()) {
    std::vector<int> row(n, -1);
    row[(*seed)[0]] = (*seed)[1];
    row[(*seed)[2]] = (*seed)[3];
    for (size_t f = 0; f < n; ++f) {
      if (row[f] >= 0) continue;
      int best_level = 0;
      int best_gain = -1;
      for (int level = 0; level < counts[f]; ++level) {
        int gain = 0;
        for (size_t g = 0; g < n; ++g) {
          if (g == f || row[g] < 0) continue;
          bool covered = g < f ? tracker.Covered(g, row[g], f, level)
                               : tracker.Covered(f, level, g, row[g]);
          if (!covered) ++gain;
        }
        if (gain > best_gain) {
          best_gain = gain;
          best_level = level;
        }
      }
      row[f] = best_level;
    }
    tracker.Mark(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<std::vector<int>> CoveringRows(const std::vector<int>& level_counts,
                                           CoverageKind kind) {
  if (level_counts.empty()) return {};
  for (int c : level_counts) {
    if (c < 1) throw std::invalid_argument("factor without levels");
  }
  switch (kind) {
    case CoverageKind::kAllBeMixturesPaths:
      return ProductRows(level_counts);
    case CoverageKind::kPairwiseBeMixtures:
      return PairwiseRows(level_counts);
    case CoverageKind::kAllBeMixtures: {
      int rows = *std::max_element(level_counts.begin(), level_counts.end());
      std::vector<std::vector<int>> out;
      for (int r = 0; r < rows; ++r) {
        std::vector<int> row;
        for (int c : level_counts) row.push_back(r % c);
        out.push_back(std::move(row));
      }
      return out;
    }
  }
  return {};
}

std::vector<TestConfiguration> GenerateConfigurations(
    const CallPath& path, const CoverageCriterion& criterion,
    const SystemModel& model) {
  std::vector<std::vector<Mixture>> levels;
  std::vector<int> counts;
  for (const CiId& ci : path.vertices) {
    if (model.EnvironmentsOf(ci).empty()) {
      throw PlanError("CI '" + ci + "' has no boundary environments");
    }
    levels.push_back(MixturesOf(model, ci, criterion.width));
    if (levels.back().empty()) {
      throw PlanError("CI '" + ci + "' has no deployable mixture of width " +
                      std::to_string(criterion.width));
    }
    counts.push_back(static_cast<int>(levels.back().size()));
  }
  std::vector<TestConfiguration> out;
  for (const auto& row : CoveringRows(counts, criterion.kind)) {
    TestConfiguration config{path, {}};
    for (size_t i = 0; i < row.size(); ++i) {
      config.mixtures.push_back(levels[i][row[i]]);
    }
    out.push_back(std::move(config));
  }
  return out;
}

int ConfigurationCount(const CallPath& path, const CoverageCriterion& criterion,
                       const SystemModel& model) {
  return static_cast<int>(
      GenerateConfigurations(path, criterion, model).size());
}

}  // namespace ltp
