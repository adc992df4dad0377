#include "phoneboost/voting.hpp"

#include <algorithm>
#include <numeric>

#include "phoneboost/error.hpp"
#include "phoneboost/text.hpp"

namespace phoneboost::multiclass {

std::size_t VoteTally::total() const { return std::accumulate(votes.begin(), votes.end(), std::size_t{0}); }

VoteResult vote_among(std::size_t n, std::span<const std::size_t> candidates, const PairOutcome& outcome) {
  if (candidates.empty()) throw InvalidArgument("no candidates to vote among");
  VoteResult r;
  r.tally.votes.assign(n, 0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      const std::size_t a = candidates[i], b = candidates[j];
      const std::size_t w = outcome(a, b);
      if (w != a && w != b) throw Error("pair outcome returned a phone outside the pair");
      ++r.tally.votes[w];
      ++r.consulted;
    }
  }
  r.winner = candidates.front();
  for (std::size_t c : candidates) {
    if (r.tally.votes[c] > r.tally.votes[r.winner]) r.winner = c;
  }
  return r;
}

VoteResult vote_all_vs_all(std::size_t n, const PairOutcome& outcome) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  return vote_among(n, all, outcome);
}

HierarchicalResult vote_hierarchical(std::size_t n, std::size_t n1, const PairOutcome& outcome) {
  if (n1 < 2 || n1 > n) {
    throw InvalidArgument("survivor count must be in 2.." + std::to_string(n) + ", got " + std::to_string(n1));
  }
  HierarchicalResult r;
  std::vector<std::size_t> survivors(n);
  std::iota(survivors.begin(), survivors.end(), 0);
  while (survivors.size() > n1) {
    const VoteResult round = vote_among(n, survivors, outcome);
    r.consulted_per_round.push_back(round.consulted);
    std::size_t loser = survivors.front();
    for (std::size_t c : survivors) {
      if (round.tally.votes[c] <= round.tally.votes[loser]) loser = c;
    }
    r.eliminated.push_back(loser);
    survivors.erase(std::find(survivors.begin(), survivors.end(), loser));
  }
  const VoteResult final_round = vote_among(n, survivors, outcome);
  r.consulted_per_round.push_back(final_round.consulted);
  r.winner = final_round.winner;
  r.final_tally = final_round.tally;
  return r;
}

std::size_t argmax_first(std::span<const double> scores) {
  if (scores.empty()) throw InvalidArgument("argmax of an empty score list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

OutcomeCache::OutcomeCache(std::size_t n, PairOutcome outcome)
    : n_(n), outcome_(std::move(outcome)), cache_(n * n, -1) {}

std::size_t OutcomeCache::operator()(std::size_t a, std::size_t b) {
  int& slot = cache_[a * n_ + b];
  if (slot < 0) {
    slot = static_cast<int>(outcome_(a, b));
    ++evaluations_;
  }
  return static_cast<std::size_t>(slot);
}

PairOutcome OutcomeCache::as_function() {
  return [this](std::size_t a, std::size_t b) { return (*this)(a, b); };
}

VotingScheme parse_voting(std::string_view text_in) {
  if (text_in == "ava") return {VotingKind::all_vs_all, 0};
  if (text_in == "ova") return {VotingKind::one_vs_all, 0};
  if (text_in.starts_with("hier:")) {
    const auto n1 = text::parse_int(text_in.substr(5), "hierarchical survivor count");
    if (n1 < 2) throw ValidationError("hierarchical survivor count must be at least 2");
    return {VotingKind::hierarchical, static_cast<std::size_t>(n1)};
  }
  throw ValidationError("unknown voting scheme '" + std::string(text_in) + "' (expected ava, hier:N1 or ova)");
}

std::string to_string(const VotingScheme& scheme) {
  switch (scheme.kind) {
    case VotingKind::all_vs_all: return "ava";
    case VotingKind::one_vs_all: return "ova";
    case VotingKind::hierarchical: return "hier:" + std::to_string(scheme.survivors);
  }
  return "?";
}

}  // namespace phoneboost::multiclass
