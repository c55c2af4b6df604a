#include "rules.hpp"

#include <algorithm>
#include <limits>

namespace neptune {

int64_t LabeledDataset::positives() const {
  int64_t n = 0;
  for (const auto& r : rows) n += r.v1 ? 1 : 0;
  return n;
}

int64_t LabeledDataset::negatives() const {
  return static_cast<int64_t>(rows.size()) - positives();
}

int Rule::antecedent_size() const {
  int n = 0;
  for (uint8_t b : bins) n += b != 0;
  return n;
}

bool rule_matches(const Rule& rule,
                  const std::array<uint8_t, kNumVariables>& bins) {
  for (int v = 0; v < kNumVariables; ++v) {
    uint8_t want = rule.bins[static_cast<size_t>(v)];
    if (want != 0 && bins[static_cast<size_t>(v)] != want) return false;
  }
  return true;
}

namespace {

// Fixed-capacity bitset over row indices.
class RowSet {
 public:
  explicit RowSet(size_t bits = 0) : bits_(bits), words_((bits + 63) / 64, 0) {}

  void set(size_t i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }

  bool any() const {
    for (uint64_t w : words_) {
      if (w) return true;
    }
    return false;
  }

  int64_t count() const {
    int64_t n = 0;
    for (uint64_t w : words_) n += __builtin_popcountll(w);
    return n;
  }

  // *this = a & b; returns whether any bit survives.
  bool assign_and(const RowSet& a, const RowSet& b) {
    uint64_t acc = 0;
    for (size_t i = 0; i < words_.size(); ++i) {
      words_[i] = a.words_[i] & b.words_[i];
      acc |= words_[i];
    }
    return acc != 0;
  }

  void merge(const RowSet& other) {
    for (size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  }

 private:
  size_t bits_;
  std::vector<uint64_t> words_;
};

struct MiningIndex {
  int num_vars = 0;
  int64_t num_positives = 0;
  int64_t num_negatives = 0;
  // [var][bin-1] -> rows (positives and negatives indexed separately).
  std::vector<std::array<RowSet, 4>> pos_items;
  std::vector<std::array<RowSet, 4>> neg_items;
  RowSet all_pos, all_neg;
};

MiningIndex build_index(const LabeledDataset& data) {
  if (data.num_vars < 1 || data.num_vars > kNumVariables) {
    throw std::invalid_argument("num_vars must be 1..18");
  }
  MiningIndex ix;
  ix.num_vars = data.num_vars;
  std::vector<size_t> pos_rows, neg_rows;
  for (size_t r = 0; r < data.rows.size(); ++r) {
    (data.rows[r].v1 ? pos_rows : neg_rows).push_back(r);
  }
  ix.num_positives = static_cast<int64_t>(pos_rows.size());
  ix.num_negatives = static_cast<int64_t>(neg_rows.size());
  if (ix.num_positives == 0) {
    throw std::invalid_argument("dataset has no positive rows");
  }
  ix.pos_items.assign(static_cast<size_t>(ix.num_vars),
                      {RowSet(pos_rows.size()), RowSet(pos_rows.size()),
                       RowSet(pos_rows.size()), RowSet(pos_rows.size())});
  ix.neg_items.assign(static_cast<size_t>(ix.num_vars),
                      {RowSet(neg_rows.size()), RowSet(neg_rows.size()),
                       RowSet(neg_rows.size()), RowSet(neg_rows.size())});
  ix.all_pos = RowSet(pos_rows.size());
  ix.all_neg = RowSet(neg_rows.size());
  for (size_t i = 0; i < pos_rows.size(); ++i) {
    ix.all_pos.set(i);
    const auto& bins = data.rows[pos_rows[i]].bins;
    for (int v = 0; v < ix.num_vars; ++v) {
      uint8_t b = bins[static_cast<size_t>(v)];
      if (b < 1 || b > 4) throw std::invalid_argument("bin out of range in dataset");
      ix.pos_items[static_cast<size_t>(v)][b - 1].set(i);
    }
  }
  for (size_t i = 0; i < neg_rows.size(); ++i) {
    ix.all_neg.set(i);
    const auto& bins = data.rows[neg_rows[i]].bins;
    for (int v = 0; v < ix.num_vars; ++v) {
      uint8_t b = bins[static_cast<size_t>(v)];
      if (b < 1 || b > 4) throw std::invalid_argument("bin out of range in dataset");
      ix.neg_items[static_cast<size_t>(v)][b - 1].set(i);
    }
  }
  return ix;
}

// Depth-first walk of antecedents in canonical order (variables ascending,
// bins ascending). Branches that match no positive are pruned: none of their
// extensions can reach confidence 1 with >= 1 positive. Negative matches only
// shrink along a branch, so confidence is checked at the emitted size.
//
// visit(depth, bins, pos, neg) is called for every surviving node; it returns
// true to descend further.
using NodeVisitor = std::function<bool(
    int, const std::array<uint8_t, kNumVariables>&, const RowSet&, const RowSet&)>;

struct Walker {
  const MiningIndex& ix;
  int max_depth;
  const NodeVisitor& visit;
  std::array<uint8_t, kNumVariables> bins{};
  // One scratch (pos, neg) pair per depth, allocated once.
  std::vector<RowSet> pos_stack, neg_stack;

  Walker(const MiningIndex& index, int depth_limit, const NodeVisitor& v)
      : ix(index), max_depth(depth_limit), visit(v) {
    pos_stack.assign(static_cast<size_t>(max_depth) + 1,
                     RowSet(static_cast<size_t>(ix.num_positives)));
    neg_stack.assign(static_cast<size_t>(max_depth) + 1,
                     RowSet(static_cast<size_t>(ix.num_negatives)));
    pos_stack[0] = ix.all_pos;
    neg_stack[0] = ix.all_neg;
  }

  void run() { descend(0, 0); }

  void descend(int depth, int var_start) {
    if (depth == max_depth) return;
    for (int var = var_start; var < ix.num_vars; ++var) {
      for (uint8_t bin = 1; bin <= 4; ++bin) {
        RowSet& pos = pos_stack[static_cast<size_t>(depth) + 1];
        if (!pos.assign_and(pos_stack[static_cast<size_t>(depth)],
                            ix.pos_items[static_cast<size_t>(var)][bin - 1])) {
          continue;
        }
        RowSet& neg = neg_stack[static_cast<size_t>(depth) + 1];
        neg.assign_and(neg_stack[static_cast<size_t>(depth)],
                       ix.neg_items[static_cast<size_t>(var)][bin - 1]);
        bins[static_cast<size_t>(var)] = bin;
        if (visit(depth + 1, bins, pos, neg)) descend(depth + 1, var + 1);
        bins[static_cast<size_t>(var)] = 0;
      }
    }
  }
};

}  // namespace

void mine_rules_visit(
    const LabeledDataset& data, int antecedent_size,
    const std::function<void(const std::array<uint8_t, kNumVariables>&, int64_t)>& fn) {
  MiningIndex ix = build_index(data);
  if (antecedent_size < 1 || antecedent_size > ix.num_vars) {
    throw std::invalid_argument("antecedent size must be 1.." +
                                std::to_string(ix.num_vars));
  }
  NodeVisitor visitor = [&](int depth, const std::array<uint8_t, kNumVariables>& bins,
                            const RowSet& pos, const RowSet& neg) {
    if (depth == antecedent_size) {
      if (!neg.any()) fn(bins, pos.count());
      return false;
    }
    return true;
  };
  Walker(ix, antecedent_size, visitor).run();
}

std::vector<Rule> mine_rules(const LabeledDataset& data, int antecedent_size) {
  std::vector<Rule> rules;
  mine_rules_visit(data, antecedent_size,
                   [&](const std::array<uint8_t, kNumVariables>& bins, int64_t covered) {
                     rules.push_back(Rule{bins, covered});
                   });
  return rules;
}

std::vector<SweepEntry> sweep_rulesets(const LabeledDataset& data) {
  MiningIndex ix = build_index(data);
  int max_size = ix.num_vars;
  std::vector<SweepEntry> sweep(static_cast<size_t>(max_size - 1));
  std::vector<RowSet> covered(static_cast<size_t>(max_size - 1),
                              RowSet(static_cast<size_t>(ix.num_positives)));
  for (int size = 2; size <= max_size; ++size) {
    auto& entry = sweep[static_cast<size_t>(size - 2)];
    entry.window_s = data.window_s;
    entry.num_variables = size + 1;  // the label is the extra variable
  }
  // Single pass over the antecedent tree; a node of depth d >= 2 with no
  // matching negatives is exactly one qualifying rule of size d.
  NodeVisitor visitor = [&](int depth, const std::array<uint8_t, kNumVariables>&,
                            const RowSet& pos, const RowSet& neg) {
    if (depth >= 2 && !neg.any()) {
      auto& entry = sweep[static_cast<size_t>(depth - 2)];
      entry.rule_count += 1;
      int64_t c = pos.count();
      if (c >= 2) entry.multi_positive_rules += 1;
      covered[static_cast<size_t>(depth - 2)].merge(pos);
    }
    return true;
  };
  Walker(ix, max_size, visitor).run();
  for (int size = 2; size <= max_size; ++size) {
    sweep[static_cast<size_t>(size - 2)].total_positives_covered =
        covered[static_cast<size_t>(size - 2)].count();
  }
  return sweep;
}

int select_final_num_variables(std::span<const SweepEntry> sweep) {
  int64_t best_coverage = 0;
  for (const SweepEntry& e : sweep) {
    best_coverage = std::max(best_coverage, e.total_positives_covered);
  }
  if (best_coverage == 0) {
    throw TrainingError("no confidence-1 rules exist at any antecedent size");
  }
  int best_num_vars = 0;
  double best_proportion = -1.0;
  for (const SweepEntry& e : sweep) {  // ascending num_variables: ties keep first
    if (e.total_positives_covered != best_coverage) continue;
    double proportion = static_cast<double>(e.multi_positive_rules) /
                        static_cast<double>(e.rule_count);
    if (proportion > best_proportion) {
      best_proportion = proportion;
      best_num_vars = e.num_variables;
    }
  }
  return best_num_vars;
}

RuleSet materialize_ruleset(const LabeledDataset& data, int num_variables) {
  RuleSet set;
  set.window_s = data.window_s;
  set.num_variables = num_variables;
  set.rules = mine_rules(data, num_variables - 1);

  // Recount coverage as the union over all rules.
  std::vector<size_t> pos_rows;
  for (size_t r = 0; r < data.rows.size(); ++r) {
    if (data.rows[r].v1) pos_rows.push_back(r);
  }
  std::vector<bool> hit(pos_rows.size(), false);
  for (const Rule& rule : set.rules) {
    for (size_t i = 0; i < pos_rows.size(); ++i) {
      if (!hit[i] && rule_matches(rule, data.rows[pos_rows[i]].bins)) hit[i] = true;
    }
  }
  set.total_positives_covered =
      static_cast<int64_t>(std::count(hit.begin(), hit.end(), true));
  return set;
}

RuleSet select_final(const LabeledDataset& data,
                     std::span<const SweepEntry> sweep) {
  return materialize_ruleset(data, select_final_num_variables(sweep));
}

bool apply_rules(const RuleSet& rules, const QuantizedVector& qv) {
  for (const Rule& rule : rules.rules) {
    if (rule_matches(rule, qv.bins)) return true;
  }
  return false;
}

}  // namespace neptune
