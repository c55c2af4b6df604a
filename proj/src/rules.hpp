// Confidence-1 association rule mining: antecedents are (variable, bin)
// items, the consequent is always "positive segment" (V1 = 1). A rule
// qualifies when at least one positive row matches every item and no negative
// row does.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "quantize.hpp"

namespace neptune {

struct LabeledDataset {
  int window_s = 0;
  int num_vars = kNumVariables;  // leading variables in play (tests may use fewer)
  std::vector<QuantizedVector> rows;

  int64_t positives() const;
  int64_t negatives() const;
};

// bins[v] in 1..4 selects variable v; 0 leaves it out of the antecedent.
struct Rule {
  std::array<uint8_t, kNumVariables> bins{};
  int64_t positives_covered = 0;

  int antecedent_size() const;
};

bool rule_matches(const Rule& rule, const std::array<uint8_t, kNumVariables>& bins);

struct RuleSet {
  int window_s = 0;
  int num_variables = 0;  // antecedent variables + the label; 0 = empty set
  std::vector<Rule> rules;
  int64_t total_positives_covered = 0;
};

// All qualifying antecedents of exactly antecedent_size items, in canonical
// order (variables ascending, bins ascending). Requires >= 1 positive row;
// antecedent_size must be in [1, num_vars].
std::vector<Rule> mine_rules(const LabeledDataset& data, int antecedent_size);

struct SweepEntry {
  int window_s = 0;
  int num_variables = 0;
  int64_t rule_count = 0;
  int64_t multi_positive_rules = 0;  // rules covering >= 2 positives
  int64_t total_positives_covered = 0;
};

// One entry per num_variables in 3..num_vars+1 (antecedent sizes 2..num_vars),
// computed in a single pass; rule lists are not materialized here.
std::vector<SweepEntry> sweep_rulesets(const LabeledDataset& data);

// The spec's selection heuristic: among entries with maximum coverage, take
// the one with the highest proportion of rules covering >= 2 positives,
// breaking ties toward fewer variables. Throws when every entry is empty.
int select_final_num_variables(std::span<const SweepEntry> sweep);

RuleSet materialize_ruleset(const LabeledDataset& data, int num_variables);

RuleSet select_final(const LabeledDataset& data,
                     std::span<const SweepEntry> sweep);

// True iff any rule's antecedent is fully matched.
bool apply_rules(const RuleSet& rules, const QuantizedVector& qv);

// Streaming access for memory-bound callers: fn(bins, positives_covered) per
// qualifying rule of the given size, in canonical order.
void mine_rules_visit(
    const LabeledDataset& data, int antecedent_size,
    const std::function<void(const std::array<uint8_t, kNumVariables>&, int64_t)>& fn);

}  // namespace neptune
