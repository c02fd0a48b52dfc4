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

#include "ltp/ordering.h"

#include <algorithm>
#include <deque>
#include <random>
#include <stdexcept>
#include <tuple>

namespace ltp {

OrderedPlanDraft BuildDraft(const std::vector<GroupRuns>& runs) {
  OrderedPlanDraft draft;
  for (const auto& g : runs) {
    GroupSchedule schedule{g.grouping, {}};
    for (const auto& d : g.deployments) {
      schedule.cases.push_back({d.configuration, d.runs});
    }
    draft.groups.push_back(std::move(schedule));
  }
  return draft;
}

int Similarity(const TestConfiguration& a, const TestConfiguration& b) {
  if (a.path != b.path) {
    throw std::invalid_argument("similarity of configurations on different "
                                "paths");
  }
  int distance = 0;
  for (size_t i = 0; i < a.mixtures.size(); ++i) {
    if (a.mixtures[i] != b.mixtures[i]) ++distance;
  }
  return distance;
}

int Similarity(const TestConfiguration& a, const TestConfiguration& b,
               const std::set<CiId>& counted) {
  if (a.path != b.path) {
    throw std::invalid_argument("similarity of configurations on different "
                                "paths");
  }
  int distance = 0;
  for (size_t i = 0; i < a.mixtures.size(); ++i) {
    if (a.mixtures[i] != b.mixtures[i] && counted.contains(a.path.vertices[i])) {
      ++distance;
    }
  }
  return distance;
}

std::optional<PrecedencePair> FindPrecedenceViolation(
    const std::vector<std::vector<TsiId>>& cases,
    const std::vector<PrecedencePair>& pairs) {
  auto invokes = [](const std::vector<TsiId>& c, const TsiId& t) {
    return std::find(c.begin(), c.end(), t) != c.end();
  };
  for (const auto& pair : pairs) {
    for (const auto& c : cases) {
      long last_leading = -1;
      long first_following = static_cast<long>(c.size());
      for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == pair.leading) last_leading = static_cast<long>(i);
        if (c[i] == pair.following && first_following == (long)c.size()) {
          first_following = static_cast<long>(i);
        }
      }
      if (last_leading >= 0 && first_following < (long)c.size() &&
          first_following < last_leading) {
        return pair;
      }
    }
    long last_leading_case = -1;
    for (size_t i = 0; i < cases.size(); ++i) {
      if (invokes(cases[i], pair.leading)) last_leading_case = (long)i;
    }
    for (size_t j = 0; j < cases.size(); ++j) {
      if (invokes(cases[j], pair.following) &&
          !invokes(cases[j], pair.leading) && (long)j < last_leading_case) {
        return pair;
      }
    }
  }
  return std::nullopt;
}

namespace {

using TsiSet = std::set<TsiId>;

TsiSet TsisOf(const CaseDraft& c, const std::map<AppId, TsiId>& tsi_of) {
  TsiSet out;
  for (const auto& r : c.invocations) out.insert(tsi_of.at(r.app));
  return out;
}

// Stable topological sort of invocations by the precedence pairs.
void SortInvocations(CaseDraft& c, const std::vector<PrecedencePair>& pairs,
                     const std::map<AppId, TsiId>& tsi_of) {
  const size_t n = c.invocations.size();
  std::vector<std::vector<size_t>> next(n);
  std::vector<int> indegree(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const TsiId& a = tsi_of.at(c.invocations[i].app);
      const TsiId& b = tsi_of.at(c.invocations[j].app);
      for (const auto& p : pairs) {
        if (p.leading == a && p.following == b) {
          next[i].push_back(j);
          ++indegree[j];
          break;
        }
      }
    }
  }
  std::set<size_t> ready;
  for (size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  std::vector<Run> ordered;
  while (!ready.empty()) {
    size_t i = *ready.begin();
    ready.erase(ready.begin());
    ordered.push_back(c.invocations[i]);
    for (size_t j : next[i]) {
      if (--indegree[j] == 0) ready.insert(j);
    }
  }
  if (ordered.size() != n) throw PlanError("precedence cycle inside a case");
  c.invocations = std::move(ordered);
}

// Kahn's algorithm preferring the smallest index; nullopt on a cycle.
std::optional<std::vector<size_t>> TopoOrder(
    size_t n, const std::set<std::pair<size_t, size_t>>& edges) {
  std::vector<std::vector<size_t>> next(n);
  std::vector<int> indegree(n, 0);
  for (const auto& [a, b] : edges) {
    next[a].push_back(b);
    ++indegree[b];
  }
  std::set<size_t> ready;
  for (size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  std::vector<size_t> out;
  while (!ready.empty()) {
    size_t i = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(i);
    for (size_t j : next[i]) {
      if (--indegree[j] == 0) ready.insert(j);
    }
  }
  if (out.size() != n) return std::nullopt;
  return out;
}

bool Reaches(size_t from, size_t to,
             const std::vector<std::vector<size_t>>& adjacency) {
  std::vector<bool> seen(adjacency.size(), false);
  std::deque<size_t> frontier = {from};
  seen[from] = true;
  while (!frontier.empty()) {
    size_t v = frontier.front();
    frontier.pop_front();
    if (v == to) return true;
    for (size_t w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = true;
        frontier.push_back(w);
      }
    }
  }
  return false;
}

struct CaseEdge {
  size_t from_group, from_case, to_group, to_case;
  const PrecedencePair* pair;
};

class PrecedenceEnforcer {
 public:
  PrecedenceEnforcer(OrderedPlanDraft draft,
                     const std::vector<PrecedencePair>& pairs,
                     const PrecedenceContext& context)
      : draft_(std::move(draft)), pairs_(pairs), context_(context) {}

  OrderedPlanDraft Run() {
    const size_t max_rounds = 4 + CountInvocations() * (pairs_.size() + 1);
    for (size_t round = 0;; ++round) {
      for (auto& g : draft_.groups) {
        for (auto& c : g.cases) SortInvocations(c, pairs_, context_.tsi_of);
      }
      auto conflicts = Conflicts();
      if (conflicts.empty()) break;
      if (round >= max_rounds || !MoveFollowing(conflicts)) {
        throw PrecedenceError(*conflicts.front().pair);
      }
    }
    Arrange();
    draft_.maintained = pairs_;
    return std::move(draft_);
  }

 private:
  size_t CountInvocations() const {
    size_t n = 0;
    for (const auto& g : draft_.groups) {
      for (const auto& c : g.cases) n += c.invocations.size();
    }
    return n;
  }

  std::vector<CaseEdge> Edges() const {
    std::vector<std::vector<TsiSet>> sets;
    for (const auto& g : draft_.groups) {
      sets.emplace_back();
      for (const auto& c : g.cases) {
        sets.back().push_back(TsisOf(c, context_.tsi_of));
      }
    }
    std::vector<CaseEdge> edges;
    for (const auto& p : pairs_) {
      for (size_t ga = 0; ga < sets.size(); ++ga) {
        for (size_t ca = 0; ca < sets[ga].size(); ++ca) {
          if (!sets[ga][ca].contains(p.leading)) continue;
          for (size_t gb = 0; gb < sets.size(); ++gb) {
            for (size_t cb = 0; cb < sets[gb].size(); ++cb) {
              const TsiSet& s = sets[gb][cb];
              if (s.contains(p.following) && !s.contains(p.leading)) {
                edges.push_back({ga, ca, gb, cb, &p});
              }
            }
          }
        }
      }
    }
    return edges;
  }

  // Edges lying on a cycle of the grouping graph or of a grouping's case
  // graph; any such edge prevents a contiguous arrangement.
  std::vector<CaseEdge> Conflicts() const {
    const auto edges = Edges();
    const size_t groups = draft_.groups.size();
    std::vector<std::vector<size_t>> group_adj(groups);
    std::vector<std::vector<std::vector<size_t>>> case_adj(groups);
    for (size_t g = 0; g < groups; ++g) {
      case_adj[g].resize(draft_.groups[g].cases.size());
    }
    for (const auto& e : edges) {
      if (e.from_group != e.to_group) {
        group_adj[e.from_group].push_back(e.to_group);
      } else {
        case_adj[e.from_group][e.from_case].push_back(e.to_case);
      }
    }
    std::vector<CaseEdge> out;
    for (const auto& e : edges) {
      bool cyclic = e.from_group != e.to_group
                        ? Reaches(e.to_group, e.from_group, group_adj)
                        : Reaches(e.to_case, e.from_case,
                                  case_adj[e.from_group]);
      if (cyclic) out.push_back(e);
    }
    return out;
  }

  // Moves following invocations of conflicting cases into compatible cases
  // invoking the leader. Returns whether anything moved.
  bool MoveFollowing(const std::vector<CaseEdge>& conflicts) {
    for (const auto& e : conflicts) {
      CaseDraft& source = draft_.groups[e.to_group].cases[e.to_case];
      bool moved = false;
      for (size_t i = 0; i < source.invocations.size();) {
        const ltp::Run run = source.invocations[i];
        if (context_.tsi_of.at(run.app) != e.pair->following) {
          ++i;
          continue;
        }
        auto target = FindCompatible(run, e.pair->leading, &source);
        if (!target) {
          ++i;
          continue;
        }
        auto [g, c] = *target;
        draft_.groups[g].cases[c].invocations.push_back(run);
        source.invocations.erase(source.invocations.begin() + i);
        draft_.notes.push_back("moved " + run.app + " under " +
                               draft_.groups[g].cases[c].configuration.Body() +
                               " for precedence " + e.pair->leading + " -> " +
                               e.pair->following);
        if (context_.on_receive) context_.on_receive(draft_.groups[g]);
        moved = true;
      }
      if (moved) {
        DropEmpty();
        return true;
      }
    }
    return false;
  }

  std::optional<std::pair<size_t, size_t>> FindCompatible(
      const ltp::Run& run, const TsiId& leading, const CaseDraft* skip) const {
    for (size_t g = 0; g < draft_.groups.size(); ++g) {
      const auto& cases = draft_.groups[g].cases;
      for (size_t c = 0; c < cases.size(); ++c) {
        if (&cases[c] == skip) continue;
        if (!TsisOf(cases[c], context_.tsi_of).contains(leading)) continue;
        if (!IsSubPath(run.configuration.path, cases[c].configuration.path)) {
          continue;
        }
        auto restricted = cases[c].configuration.Restrict(run.configuration.path);
        if (restricted && *restricted == run.configuration) {
          return std::make_pair(g, c);
        }
      }
    }
    return std::nullopt;
  }

  void DropEmpty() {
    for (auto& g : draft_.groups) {
      std::erase_if(g.cases,
                    [](const CaseDraft& c) { return c.invocations.empty(); });
    }
    std::erase_if(draft_.groups,
                  [](const GroupSchedule& g) { return g.cases.empty(); });
  }

  void Arrange() {
    const auto edges = Edges();
    std::set<std::pair<size_t, size_t>> group_edges;
    for (const auto& e : edges) {
      if (e.from_group != e.to_group) {
        group_edges.insert({e.from_group, e.to_group});
      }
    }
    auto group_order = TopoOrder(draft_.groups.size(), group_edges);
    if (!group_order) throw PrecedenceError(*edges.front().pair);
    std::vector<GroupSchedule> arranged;
    for (size_t g : *group_order) {
      arranged.push_back(ArrangeCases(g, edges));
    }
    draft_.groups = std::move(arranged);
  }

  // Cases with the same TSI set form a class; classes follow a topological
  // order and keep their internal order.
  GroupSchedule ArrangeCases(size_t g, const std::vector<CaseEdge>& edges) {
    GroupSchedule& schedule = draft_.groups[g];
    std::vector<TsiSet> classes;
    std::vector<size_t> class_of;
    for (const auto& c : schedule.cases) {
      TsiSet s = TsisOf(c, context_.tsi_of);
      auto it = std::find(classes.begin(), classes.end(), s);
      class_of.push_back(static_cast<size_t>(it - classes.begin()));
      if (it == classes.end()) classes.push_back(std::move(s));
    }
    std::set<std::pair<size_t, size_t>> class_edges;
    for (const auto& e : edges) {
      if (e.from_group != g || e.to_group != g) continue;
      class_edges.insert({class_of[e.from_case], class_of[e.to_case]});
    }
    auto order = TopoOrder(classes.size(), class_edges);
    if (!order) throw PrecedenceError(*edges.front().pair);
    GroupSchedule out{schedule.grouping, {}};
    for (size_t k : *order) {
      for (size_t c = 0; c < schedule.cases.size(); ++c) {
        if (class_of[c] == k) out.cases.push_back(schedule.cases[c]);
      }
    }
    return out;
  }

  OrderedPlanDraft draft_;
  const std::vector<PrecedencePair>& pairs_;
  const PrecedenceContext& context_;
};

}  // namespace

OrderedPlanDraft EnforcePrecedence(OrderedPlanDraft draft,
                                   const std::vector<PrecedencePair>& pairs,
                                   const PrecedenceContext& context) {
  OrderedPlanDraft out =
      PrecedenceEnforcer(std::move(draft), pairs, context).Run();
  std::vector<std::vector<TsiId>> scan;
  for (const auto& g : out.groups) {
    for (const auto& c : g.cases) {
      scan.emplace_back();
      for (const auto& r : c.invocations) {
        scan.back().push_back(context.tsi_of.at(r.app));
      }
    }
  }
  if (auto violation = FindPrecedenceViolation(scan, pairs)) {
    throw PrecedenceError(*violation);
  }
  return out;
}

std::vector<std::vector<int>> GrayCode(const std::vector<int>& radices) {
  std::vector<std::vector<int>> seq = {{}};
  for (auto it = radices.rbegin(); it != radices.rend(); ++it) {
    std::vector<std::vector<int>> next;
    for (int v = 0; v < *it; ++v) {
      const bool reversed = v % 2 == 1;
      for (size_t k = 0; k < seq.size(); ++k) {
        const auto& tail = reversed ? seq[seq.size() - 1 - k] : seq[k];
        std::vector<int> row = {v};
        row.insert(row.end(), tail.begin(), tail.end());
        next.push_back(std::move(row));
      }
    }
    seq = std::move(next);
  }
  return seq;
}

std::vector<size_t> DigitOrder(const CallPath& path,
                               const std::set<CiId>& rolling,
                               const std::map<CiId, int>& criticality) {
  std::vector<size_t> order(path.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto rank = [&](size_t i) {
    auto it = criticality.find(path.vertices[i]);
    return it == criticality.end() ? 0 : it->second;
  };
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const bool ra = rolling.contains(path.vertices[a]);
    const bool rb = rolling.contains(path.vertices[b]);
    if (ra != rb) return ra;
    return rank(a) > rank(b);
  });
  return order;
}

namespace {

int MaxCriticality(const TestConfiguration& a, const TestConfiguration& b,
                   const std::set<CiId>* only,
                   const std::map<CiId, int>& criticality) {
  int best = -1;
  for (size_t i = 0; i < a.mixtures.size(); ++i) {
    const CiId& ci = a.path.vertices[i];
    if (a.mixtures[i] == b.mixtures[i]) continue;
    if (only != nullptr && !only->contains(ci)) continue;
    auto it = criticality.find(ci);
    best = std::max(best, it == criticality.end() ? 0 : it->second);
  }
  return best;
}

std::optional<std::vector<CaseDraft>> GrayOrder(
    const std::vector<CaseDraft>& cases, const CallPath& path,
    const std::vector<std::vector<Mixture>>& levels,
    const std::set<CiId>& rolling, const std::map<CiId, int>& criticality) {
  if (levels.size() != path.size()) return std::nullopt;
  size_t product = 1;
  for (const auto& l : levels) product *= l.size();
  if (product != cases.size()) return std::nullopt;
  std::map<std::vector<int>, size_t> by_digits;
  for (size_t c = 0; c < cases.size(); ++c) {
    std::vector<int> digits;
    for (size_t i = 0; i < path.size(); ++i) {
      const auto& l = levels[i];
      auto it = std::find(l.begin(), l.end(), cases[c].configuration.mixtures[i]);
      if (it == l.end()) return std::nullopt;
      digits.push_back(static_cast<int>(it - l.begin()));
    }
    if (!by_digits.emplace(std::move(digits), c).second) return std::nullopt;
  }
  const auto order = DigitOrder(path, rolling, criticality);
  std::vector<int> radices;
  for (size_t i : order) radices.push_back(static_cast<int>(levels[i].size()));
  std::vector<CaseDraft> out;
  for (const auto& code : GrayCode(radices)) {
    std::vector<int> digits(path.size());
    for (size_t k = 0; k < order.size(); ++k) digits[order[k]] = code[k];
    out.push_back(cases[by_digits.at(digits)]);
  }
  return out;
}

std::vector<CaseDraft> GreedyOrder(std::vector<CaseDraft> cases,
                                   const std::set<CiId>& rolling,
                                   const std::map<CiId, int>& criticality,
                                   std::mt19937* rng) {
  if (cases.size() <= 1) return cases;
  std::vector<size_t> remaining(cases.size());
  for (size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  size_t start = 0;
  if (rng != nullptr) {
    start = std::uniform_int_distribution<size_t>(0, cases.size() - 1)(*rng);
  }
  std::vector<CaseDraft> out;
  size_t current = start;
  remaining.erase(remaining.begin() + start);
  out.push_back(cases[current]);
  while (!remaining.empty()) {
    const TestConfiguration& from = cases[current].configuration;
    auto key = [&](size_t c) {
      const TestConfiguration& to = cases[c].configuration;
      return std::make_tuple(Similarity(from, to, rolling),
                             MaxCriticality(from, to, &rolling, criticality),
                             Similarity(from, to),
                             MaxCriticality(from, to, nullptr, criticality), c);
    };
    auto best = std::min_element(
        remaining.begin(), remaining.end(),
        [&](size_t a, size_t b) { return key(a) < key(b); });
    current = *best;
    remaining.erase(best);
    out.push_back(cases[current]);
  }
  return out;
}

}  // namespace

OrderedPlanDraft OrderByConfiguration(OrderedPlanDraft draft,
                                      const ConfigurationOrderContext& context,
                                      const std::map<AppId, TsiId>& tsi_of) {
  std::optional<std::mt19937> rng;
  if (context.seed) rng.emplace(*context.seed);
  static const std::set<CiId> kNone;
  for (auto& g : draft.groups) {
    const AppId& head = g.grouping.head;
    auto rolling_it = context.rolling.find(head);
    const std::set<CiId>& rolling =
        rolling_it == context.rolling.end() ? kNone : rolling_it->second;
    std::vector<CaseDraft> ordered;
    for (size_t begin = 0; begin < g.cases.size();) {
      const TsiSet tsis = TsisOf(g.cases[begin], tsi_of);
      size_t end = begin + 1;
      while (end < g.cases.size() && TsisOf(g.cases[end], tsi_of) == tsis) {
        ++end;
      }
      std::vector<CaseDraft> block(g.cases.begin() + begin,
                                   g.cases.begin() + end);
      std::optional<std::vector<CaseDraft>> gray;
      auto levels_it = context.levels.find(head);
      if (g.grouping.coverage.kind == CoverageKind::kAllBeMixturesPaths &&
          levels_it != context.levels.end()) {
        gray = GrayOrder(block, g.grouping.max_path, levels_it->second,
                         rolling, context.criticality);
      }
      auto result = gray ? std::move(*gray)
                         : GreedyOrder(std::move(block), rolling,
                                       context.criticality,
                                       rng ? &*rng : nullptr);
      ordered.insert(ordered.end(), std::make_move_iterator(result.begin()),
                     std::make_move_iterator(result.end()));
      begin = end;
    }
    g.cases = std::move(ordered);
  }
  return draft;
}

}  // namespace ltp
