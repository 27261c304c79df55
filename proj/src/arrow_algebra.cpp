/*
 * Copyright 2026 The dyadgen Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dyadgen/arrow_algebra.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dyadgen/errors.hpp"

namespace dyadgen {

namespace {

constexpr std::array<std::string_view, kArrowTypeCount> kNames = {
    "Hub", "Path", "Old", "New", "Far", "Mid", "Near", "Self"};

// Order used in class labels; matches how the 21 classes are usually written
// ("Old/Hub (Mid/Path/Far)", "Mid/New (Path/Far/Hub/Near)").
constexpr std::array<ArrowType, 7> kDisplayOrder = {
    ArrowType::Old, ArrowType::Mid,  ArrowType::Path, ArrowType::Far,
    ArrowType::Hub, ArrowType::Near, ArrowType::New};

std::vector<Dyad> all_dyads(NodeIndex n) {
  std::vector<Dyad> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (NodeIndex hi = 2; hi <= n; ++hi)
    for (NodeIndex lo = 1; lo < hi; ++lo) out.push_back({lo, hi});
  return out;
}

void require_valid(Dyad d) {
  if (d.lo == 0 || d.lo >= d.hi)
    throw PreconditionError("invalid dyad (" + std::to_string(d.lo) + "," +
                            std::to_string(d.hi) + "): need 1 <= lo < hi");
}

std::string join_display(ArrowSet set) {
  std::string out;
  for (ArrowType t : kDisplayOrder) {
    if (!set.contains(t)) continue;
    if (!out.empty()) out += '/';
    out += arrow_name(t);
  }
  return out;
}

}  // namespace

Dyad make_dyad(NodeIndex lo, NodeIndex hi) {
  Dyad d{lo, hi};
  require_valid(d);
  return d;
}

std::string_view arrow_name(ArrowType type) { return kNames[static_cast<std::size_t>(type)]; }

std::optional<ArrowType> parse_arrow_type(std::string_view name) {
  for (ArrowType t : kAllArrowTypes)
    if (arrow_name(t) == name) return t;
  return std::nullopt;
}

std::ostream& operator<<(std::ostream& os, ArrowType type) { return os << arrow_name(type); }

int ArrowSet::size() const { return std::popcount(mask_); }

std::vector<ArrowType> ArrowSet::members() const {
  std::vector<ArrowType> out;
  for (ArrowType t : kAllArrowTypes)
    if (contains(t)) out.push_back(t);
  return out;
}

std::string to_string(ArrowSet set) {
  std::string out = "{";
  bool first = true;
  for (ArrowType t : set.members()) {
    if (!first) out += ',';
    out += arrow_name(t);
    first = false;
  }
  return out + "}";
}

std::ostream& operator<<(std::ostream& os, ArrowSet set) { return os << to_string(set); }

std::optional<ArrowType> classify_relation(Dyad parent, Dyad child) {
  require_valid(parent);
  require_valid(child);
  if (parent == child) return ArrowType::Self;
  // Parent touches a node the child has not seen yet.
  if (parent.hi > child.hi) return std::nullopt;

  if (parent.lo == child.lo) return ArrowType::Hub;   // (a,b) -> (a,c)
  if (parent.hi == child.lo) return ArrowType::Path;  // (a,b) -> (b,c)
  if (parent.hi == child.hi)                           // shared newer node
    return parent.lo < child.lo ? ArrowType::Old       // (a,c) -> (b,c)
                                : ArrowType::New;      // (b,c) -> (a,c)
  // Disjoint, and parent.hi < child.hi.
  if (parent.hi < child.lo) return ArrowType::Far;    // (a,b) -> (c,d)
  if (parent.lo < child.lo) return ArrowType::Mid;    // (a,c) -> (b,d)
  return ArrowType::Near;                              // (b,c) -> (a,d)
}

CompositionTable derive_composition_table(NodeIndex max_node) {
  if (max_node < 6)
    throw PreconditionError("derive_composition_table: max_node must be >= 6, got " +
                            std::to_string(max_node));
  const std::vector<Dyad> dyads = all_dyads(max_node);
  const std::size_t m = dyads.size();

  std::vector<std::optional<ArrowType>> rel(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) rel[a * m + b] = classify_relation(dyads[a], dyads[b]);

  CompositionTable table;
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      const auto first = rel[p * m + q];
      if (!first) continue;
      for (std::size_t r = 0; r < m; ++r) {
        const auto second = rel[q * m + r];
        if (!second) continue;
        const auto through = rel[p * m + r];
        if (!through)
          throw std::logic_error("composition produced a future-node pattern");
        table.set(*first, *second, table.at(*first, *second).with(*through));
      }
    }
  }
  return table;
}

const CompositionTable& composition_table() {
  static const CompositionTable table = derive_composition_table(6);
  return table;
}

ArrowSet compose_sets(ArrowSet s, ArrowSet t, const CompositionTable& table) {
  ArrowSet out;
  for (ArrowType x : s.members())
    for (ArrowType y : t.members()) out |= table.at(x, y);
  return out;
}

ArrowSet transitive_closure(ArrowSet s, const CompositionTable& table) {
  ArrowSet current = s.with(ArrowType::Self);
  for (;;) {
    const ArrowSet next = current | compose_sets(current, current, table);
    if (next == current) return current;
    current = next;
  }
}

std::vector<MetaDagClass> enumerate_deletion_invariant() {
  std::vector<MetaDagClass> out;
  const unsigned count = 1u << kSubstantiveArrowTypes.size();
  for (unsigned bits = 0; bits < count; ++bits) {
    ArrowSet s;
    for (std::size_t k = 0; k < kSubstantiveArrowTypes.size(); ++k)
      if ((bits >> k) & 1u) s.insert(kSubstantiveArrowTypes[k]);
    if (s.contains(ArrowType::Old) && s.contains(ArrowType::New)) continue;
    out.push_back({s, false});
  }
  return out;
}

std::vector<MetaDagClass> enumerate_closed_classes(const CompositionTable& table) {
  std::set<ArrowSet> seen;
  for (const MetaDagClass& c : enumerate_deletion_invariant())
    seen.insert(transitive_closure(c.arrows, table).without(ArrowType::Self));

  std::vector<MetaDagClass> out;
  out.reserve(seen.size());
  for (ArrowSet s : seen) out.push_back({s, true});
  std::stable_sort(out.begin(), out.end(), [](const MetaDagClass& a, const MetaDagClass& b) {
    return a.arrows.size() < b.arrows.size();
  });
  return out;
}

ArrowSet minimal_generators(ArrowSet closed, const CompositionTable& table) {
  const ArrowSet target = closed.without(ArrowType::Self);
  std::vector<ArrowType> pool;
  for (ArrowType t : kDisplayOrder)
    if (target.contains(t)) pool.push_back(t);

  const std::size_t k_max = pool.size();
  for (std::size_t k = 0; k <= k_max; ++k) {
    // Combinations of `pool` of size k in lexicographic order.
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      ArrowSet gens;
      for (std::size_t i : pick) gens.insert(pool[i]);
      if (transitive_closure(gens, table).without(ArrowType::Self) == target) return gens;
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == k_max - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return target;
}

std::string class_label(ArrowSet closed, const CompositionTable& table) {
  const ArrowSet target = closed.without(ArrowType::Self);
  if (target.empty()) return "None";
  const ArrowSet gens = minimal_generators(target, table);
  std::string label = join_display(gens);
  const ArrowSet implied = ArrowSet::from_mask(target.mask() & ~gens.mask());
  if (!implied.empty()) label += " (" + join_display(implied) + ")";
  return label;
}

std::string generated_label(ArrowSet generators, const CompositionTable& table) {
  const ArrowSet gens = generators.without(ArrowType::Self);
  if (gens.empty()) return "None";
  const ArrowSet closure = transitive_closure(gens, table).without(ArrowType::Self);
  std::string label = join_display(gens);
  const ArrowSet implied = ArrowSet::from_mask(closure.mask() & ~gens.mask());
  if (!implied.empty()) label += " (" + join_display(implied) + ")";
  return label;
}

HassePoset build_hasse(std::vector<MetaDagClass> classes) {
  const std::size_t m = classes.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (classes[a].arrows == classes[b].arrows)
        throw PreconditionError("build_hasse: duplicate class " + to_string(classes[a].arrows));

  auto strictly_below = [&](std::size_t a, std::size_t b) {
    const ArrowSet x = classes[a].arrows.without(ArrowType::Self);
    const ArrowSet y = classes[b].arrows.without(ArrowType::Self);
    return x != y && x.is_subset_of(y);
  };

  HassePoset poset;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (!strictly_below(a, b)) continue;
      bool covered = true;
      for (std::size_t c = 0; c < m && covered; ++c)
        if (strictly_below(a, c) && strictly_below(c, b)) covered = false;
      if (covered) poset.covers.emplace_back(a, b);
    }
  }
  poset.nodes = std::move(classes);
  return poset;
}

std::vector<ParentArrow> parents_of(Dyad child, ArrowSet arrows, NodeIndex n) {
  require_valid(child);
  if (child.hi > n)
    throw PreconditionError("parents_of: child node " + std::to_string(child.hi) +
                            " exceeds n=" + std::to_string(n));
  std::vector<ParentArrow> out;
  for (const Dyad& p : all_dyads(n)) {
    const auto kind = classify_relation(p, child);
    if (kind && arrows.contains(*kind)) out.push_back({p, *kind});
  }
  return out;
}

void write_hasse_dot(std::ostream& os, const HassePoset& poset, const CompositionTable& table) {
  os << "digraph hasse {\n";
  os << "  rankdir=BT;\n";
  os << "  node [shape=box];\n";
  for (std::size_t k = 0; k < poset.nodes.size(); ++k)
    os << "  c" << k << " [label=\"" << class_label(poset.nodes[k].arrows, table) << "\"];\n";
  for (const auto& [child, parent] : poset.covers) os << "  c" << child << " -> c" << parent << ";\n";
  os << "}\n";
}

void write_meta_dag_dot(std::ostream& os, ArrowSet arrows, NodeIndex n) {
  auto id = [](Dyad d) { return "d" + std::to_string(d.lo) + "_" + std::to_string(d.hi); };
  auto label = [n](Dyad d) {
    return n < 10 ? "X_" + std::to_string(d.lo) + std::to_string(d.hi)
                  : "X_" + std::to_string(d.lo) + "," + std::to_string(d.hi);
  };
  os << "digraph meta_dag {\n";
  os << "  node [shape=ellipse];\n";
  const std::vector<Dyad> dyads = all_dyads(n);
  for (const Dyad& d : dyads) os << "  " << id(d) << " [label=\"" << label(d) << "\"];\n";
  for (const Dyad& child : dyads)
    for (const ParentArrow& pa : parents_of(child, arrows, n))
      os << "  " << id(pa.parent) << " -> " << id(child) << " [label=\"" << pa.arrow << "\"];\n";
  os << "}\n";
}

void write_composition_csv(std::ostream& os, const CompositionTable& table) {
  os << "first\\second";
  for (ArrowType y : kAllArrowTypes) os << ',' << y;
  os << '\n';
  for (ArrowType x : kAllArrowTypes) {
    os << x;
    for (ArrowType y : kAllArrowTypes) os << ",\"" << to_string(table.at(x, y)) << '"';
    os << '\n';
  }
}

}  // namespace dyadgen
