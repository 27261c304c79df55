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

#ifndef DYADGEN_VERIFY_HPP
#define DYADGEN_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "dyadgen/arrow_algebra.hpp"

namespace dyadgen {

// The acceptance suite. Each check reproduces one claim at a pinned
// tolerance; the fast level shrinks seed and replication counts (and the
// tail-fit size) but never a tolerance.

namespace tolerance {
inline constexpr double kEnumerationSeconds = 1.0;
inline constexpr double kConstantAvgDegreeRel = 0.05;
inline constexpr double kLogSlopeRel = 0.10;
inline constexpr double kPolySlopeAbs = 0.05;
inline constexpr double kGammaConstantAbs = 0.3;
inline constexpr double kGammaPolynomialAbs = 0.4;
inline constexpr double kClosedFormRel = 1e-10;
inline constexpr double kMonteCarloSigmas = 3.0;
inline constexpr double kChiSquareMinP = 1e-3;
inline constexpr double kExponentRel = 0.01;
}  // namespace tolerance

enum class VerifyLevel { Fast, Full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Full;
  /// Threads for independent seeds and replications; results do not
  /// depend on it.
  unsigned threads = 1;
  /// Criteria to run (1..11); empty runs all.
  std::vector<int> only;
  /// Table used by criteria 1-3; nullptr uses the derived table.
  const CompositionTable* table = nullptr;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

/// "PASS  C4  constant-regime average degree  (12.3 s)  <detail>"
std::string format_result(const CriterionResult& r);

CriterionResult check_enumeration_counts(const CompositionTable& table);
CriterionResult check_composition_anchors(const CompositionTable& table);
CriterionResult check_closure_listing(const CompositionTable& table);
CriterionResult check_constant_regime(VerifyLevel level, unsigned threads);
CriterionResult check_logarithmic_regime(VerifyLevel level, unsigned threads);
CriterionResult check_polynomial_regime(VerifyLevel level, unsigned threads);
CriterionResult check_tail_exponents(VerifyLevel level, unsigned threads);
CriterionResult check_expected_in_degree(VerifyLevel level, unsigned threads);
CriterionResult check_parallel_determinism(VerifyLevel level, unsigned threads);
CriterionResult check_dorpa_equivalence(VerifyLevel level, unsigned threads);
CriterionResult check_exponent_self_consistency();

/// Runs the selected criteria in order, calling `progress` after each.
std::vector<CriterionResult> run_acceptance(
    const VerifyOptions& options,
    const std::function<void(const CriterionResult&)>& progress = {});

}  // namespace dyadgen

#endif  // DYADGEN_VERIFY_HPP
