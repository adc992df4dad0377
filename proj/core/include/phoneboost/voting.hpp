#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phoneboost::multiclass {

/// Winner of the classifier between phones a < b (label indices); must return a or b.
using PairOutcome = std::function<std::size_t(std::size_t a, std::size_t b)>;

struct VoteTally {
  std::vector<std::size_t> votes;  ///< one count per phone in label order
  std::size_t total() const;
};

struct VoteResult {
  std::size_t winner = 0;
  VoteTally tally;
  std::size_t consulted = 0;  ///< classifiers evaluated
};

/// All pairwise classifiers among `candidates` (ascending label indices) vote;
/// most votes wins, ties go to the earliest label. Tally covers all n phones.
VoteResult vote_among(std::size_t n, std::span<const std::size_t> candidates, const PairOutcome& outcome);
VoteResult vote_all_vs_all(std::size_t n, const PairOutcome& outcome);

struct HierarchicalResult {
  std::size_t winner = 0;
  std::vector<std::size_t> eliminated;  ///< in elimination order
  VoteTally final_tally;                ///< all-vs-all tally among the last n1 survivors
  std::vector<std::size_t> consulted_per_round;
};

/// Repeatedly tallies votes among the survivors and removes the phone with
/// the fewest (ties: the latest label) until n1 remain, then runs
/// all-vs-all among them. Throws InvalidArgument unless 2 <= n1 <= n.
HierarchicalResult vote_hierarchical(std::size_t n, std::size_t n1, const PairOutcome& outcome);

/// Index of the largest score; ties go to the earliest index.
std::size_t argmax_first(std::span<const double> scores);

/// Memoizes an outcome function so every pair is evaluated at most once.
class OutcomeCache {
 public:
  OutcomeCache(std::size_t n, PairOutcome outcome);
  std::size_t operator()(std::size_t a, std::size_t b);
  PairOutcome as_function();
  std::size_t evaluations() const { return evaluations_; }

 private:
  std::size_t n_;
  PairOutcome outcome_;
  std::vector<int> cache_;  // -1 unknown, else winner
  std::size_t evaluations_ = 0;
};

enum class VotingKind { all_vs_all, hierarchical, one_vs_all };

struct VotingScheme {
  VotingKind kind = VotingKind::all_vs_all;
  std::size_t survivors = 0;  ///< N1 for hierarchical voting
};

/// "ava", "hier:N1" or "ova".
VotingScheme parse_voting(std::string_view text);
std::string to_string(const VotingScheme& scheme);

}  // namespace phoneboost::multiclass
