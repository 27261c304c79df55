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

#ifndef DYADGEN_ARROW_ALGEBRA_HPP
#define DYADGEN_ARROW_ALGEBRA_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dyadgen {

using NodeIndex = std::uint32_t;

/// Unordered pair of distinct nodes, stored as lo < hi.
struct Dyad {
  NodeIndex lo = 0;
  NodeIndex hi = 0;

  friend constexpr bool operator==(const Dyad&, const Dyad&) = default;
  friend constexpr auto operator<=>(const Dyad&, const Dyad&) = default;
};

/// Builds a dyad; throws PreconditionError unless 1 <= lo < hi.
Dyad make_dyad(NodeIndex lo, NodeIndex hi);

/// Causal arrow kinds between a parent dyad and a child dyad. With nodes
/// a < b < c < d:
///
///   Hub   (a,b) -> (a,c)      Far   (a,b) -> (c,d)
///   Path  (a,b) -> (b,c)      Mid   (a,c) -> (b,d)
///   Old   (a,c) -> (b,c)      Near  (b,c) -> (a,d)
///   New   (b,c) -> (a,c)      Self  (a,b) -> (a,b)
enum class ArrowType : std::uint8_t { Hub, Path, Old, New, Far, Mid, Near, Self };

inline constexpr std::size_t kArrowTypeCount = 8;

inline constexpr std::array<ArrowType, kArrowTypeCount> kAllArrowTypes = {
    ArrowType::Hub, ArrowType::Path, ArrowType::Old,  ArrowType::New,
    ArrowType::Far, ArrowType::Mid,  ArrowType::Near, ArrowType::Self};

/// The seven substantive kinds (everything but Self).
inline constexpr std::array<ArrowType, 7> kSubstantiveArrowTypes = {
    ArrowType::Hub, ArrowType::Path, ArrowType::Old, ArrowType::New,
    ArrowType::Far, ArrowType::Mid,  ArrowType::Near};

std::string_view arrow_name(ArrowType type);
std::optional<ArrowType> parse_arrow_type(std::string_view name);
std::ostream& operator<<(std::ostream& os, ArrowType type);

/// Set of arrow kinds as an 8-bit mask.
class ArrowSet {
 public:
  constexpr ArrowSet() = default;
  constexpr ArrowSet(std::initializer_list<ArrowType> types) {
    for (ArrowType t : types) insert(t);
  }

  static constexpr ArrowSet from_mask(std::uint8_t mask) {
    ArrowSet s;
    s.mask_ = mask;
    return s;
  }

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(ArrowType t) const { return (mask_ >> bit(t)) & 1u; }
  constexpr void insert(ArrowType t) { mask_ |= static_cast<std::uint8_t>(1u << bit(t)); }
  constexpr void erase(ArrowType t) { mask_ &= static_cast<std::uint8_t>(~(1u << bit(t))); }
  constexpr ArrowSet with(ArrowType t) const {
    ArrowSet s = *this;
    s.insert(t);
    return s;
  }
  constexpr ArrowSet without(ArrowType t) const {
    ArrowSet s = *this;
    s.erase(t);
    return s;
  }
  constexpr bool is_subset_of(ArrowSet other) const { return (mask_ & ~other.mask_) == 0; }
  int size() const;

  /// Members in enumeration order of ArrowType.
  std::vector<ArrowType> members() const;

  constexpr ArrowSet operator|(ArrowSet o) const { return from_mask(mask_ | o.mask_); }
  constexpr ArrowSet operator&(ArrowSet o) const { return from_mask(mask_ & o.mask_); }
  constexpr ArrowSet& operator|=(ArrowSet o) {
    mask_ |= o.mask_;
    return *this;
  }

  friend constexpr bool operator==(ArrowSet, ArrowSet) = default;
  friend constexpr auto operator<=>(ArrowSet a, ArrowSet b) { return a.mask_ <=> b.mask_; }

 private:
  static constexpr unsigned bit(ArrowType t) { return static_cast<unsigned>(t); }
  std::uint8_t mask_ = 0;
};

/// "{Hub,Path,Far}" in ArrowType order; "{}" when empty.
std::string to_string(ArrowSet set);
std::ostream& operator<<(std::ostream& os, ArrowSet set);

/// Arrow kind from `parent` to `child`, or nullopt when the parent holds a
/// node later than child.hi (the five "future" patterns, which would give
/// infinite ancestral sets).
std::optional<ArrowType> classify_relation(Dyad parent, Dyad child);

/// entry(X, Y): the kinds that can point from p to r when p -X-> q and
/// q -Y-> r. X is traversed first; the table is not commutative.
class CompositionTable {
 public:
  CompositionTable() = default;

  ArrowSet at(ArrowType first, ArrowType second) const {
    return entries_[index(first, second)];
  }
  void set(ArrowType first, ArrowType second, ArrowSet value) {
    entries_[index(first, second)] = value;
  }

  friend bool operator==(const CompositionTable&, const CompositionTable&) = default;

 private:
  static std::size_t index(ArrowType a, ArrowType b) {
    return static_cast<std::size_t>(a) * kArrowTypeCount + static_cast<std::size_t>(b);
  }
  std::array<ArrowSet, kArrowTypeCount * kArrowTypeCount> entries_{};
};

/// Brute-force relation composition over all dyads on nodes 1..max_node.
/// Requires max_node >= 6; the result does not depend on max_node beyond that.
CompositionTable derive_composition_table(NodeIndex max_node = 6);

/// The table derived once at max_node = 6 and cached.
const CompositionTable& composition_table();

/// Union of table(X, Y) over X in s, Y in t.
ArrowSet compose_sets(ArrowSet s, ArrowSet t, const CompositionTable& table);

/// Least fixed point of t -> t | compose(t, t) containing s | {Self}.
/// The result always contains Self.
ArrowSet transitive_closure(ArrowSet s, const CompositionTable& table);

/// A causal meta-DAG class given by its arrow kinds; Self is implicit and
/// never stored in `arrows`.
struct MetaDagClass {
  ArrowSet arrows;
  bool closed = false;

  friend bool operator==(const MetaDagClass&, const MetaDagClass&) = default;
};

/// The 96 subsets of the seven substantive kinds without both Old and New.
std::vector<MetaDagClass> enumerate_deletion_invariant();

/// Distinct closures of the 96 deletion-invariant sets, ordered by
/// (size, mask). Yields 21 classes for the derived table.
std::vector<MetaDagClass> enumerate_closed_classes(const CompositionTable& table);

/// Smallest subset of `closed` whose closure is `closed`, ties broken by
/// display order. Self is never reported.
ArrowSet minimal_generators(ArrowSet closed, const CompositionTable& table);

/// "Gen (Implied)" label, e.g. "Old/Hub (Mid/Path/Far)"; "None" for the
/// empty class.
std::string class_label(ArrowSet closed, const CompositionTable& table);

/// Same notation for an arbitrary set: the set itself, then what its
/// closure adds, e.g. "Hub/Path (Far)".
std::string generated_label(ArrowSet generators, const CompositionTable& table);

struct HassePoset {
  std::vector<MetaDagClass> nodes;
  /// (child, parent) index pairs: nodes[child] is covered by nodes[parent].
  std::vector<std::pair<std::size_t, std::size_t>> covers;
};

/// Hasse diagram of subset inclusion; throws PreconditionError on duplicates.
HassePoset build_hasse(std::vector<MetaDagClass> classes);

struct ParentArrow {
  Dyad parent;
  ArrowType arrow;

  friend bool operator==(const ParentArrow&, const ParentArrow&) = default;
};

/// Every dyad over 1..n whose relation to `child` is a kind in `arrows`,
/// ordered by (parent.hi, parent.lo).
std::vector<ParentArrow> parents_of(Dyad child, ArrowSet arrows, NodeIndex n);

void write_hasse_dot(std::ostream& os, const HassePoset& poset, const CompositionTable& table);
void write_meta_dag_dot(std::ostream& os, ArrowSet arrows, NodeIndex n);
void write_composition_csv(std::ostream& os, const CompositionTable& table);

}  // namespace dyadgen

#endif  // DYADGEN_ARROW_ALGEBRA_HPP
