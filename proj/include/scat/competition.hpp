#pragma once

// Competitive hidden layers: SCAT (second chance), K-Sparse and KATE-style.
//
// Every layer reports a CompetitionOutcome that partitions the hidden
// positions into winners, losers (zeroed) and pass-through positions. The
// backward pass and the frozen-partition surrogate used for gradient checking
// only need that record, so they are shared by all variants.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace scat::nn {

enum class Variant { none, scat, ksparse, kate };

std::string_view to_string(Variant v) noexcept;
Variant variant_from_string(std::string_view s);

struct CompetitionOutcome {
  // SCAT: the ceil(k/2) strongest positives.  KATE: positive winners.
  // K-Sparse: every kept position.
  std::vector<std::uint32_t> winners_large;
  // SCAT: the floor(k/2) weakest positives.  KATE: negative winners.
  std::vector<std::uint32_t> winners_small;
  std::vector<std::uint32_t> losers;
  // Unchanged by the layer (SCAT: z <= 0; KATE: z == 0).
  std::vector<std::uint32_t> negatives;

  double energy = 0.0;           // sum of losing activations (KATE: positive pool)
  double energy_negative = 0.0;  // KATE only: sum of |losing negative activations|
  // Value added to every member of winners_large / winners_small.
  double offset_large = 0.0;
  double offset_small = 0.0;

  std::size_t width() const noexcept {
    return winners_large.size() + winners_small.size() + losers.size() + negatives.size();
  }
  std::size_t winner_count() const noexcept { return winners_large.size() + winners_small.size(); }
};

/// ẑ must have the same length as z. Throws ValidationError unless 1 <= k <= z.size().
template <class T>
CompetitionOutcome scat_layer(std::size_t k, std::span<const T> z, std::span<T> zhat);

/// Keeps the k (training) or floor(k*alpha) (inference) largest activations by value.
template <class T>
CompetitionOutcome ksparse_layer(std::size_t k, std::span<const T> z, std::span<T> zhat,
                                 bool training, double alpha);

template <class T>
CompetitionOutcome kate_layer(std::size_t k, double alpha, std::span<const T> z, std::span<T> zhat);

/// Routes the gradient through winners and pass-through positions, zero at losers.
/// The energy offsets are constants here.
template <class T>
void competition_backward(std::span<const T> grad_zhat, const CompetitionOutcome& outcome,
                          std::span<T> grad_z);

/// Replays a recorded partition on new activations: losers zeroed, winners
/// shifted by the recorded offsets, everything else passed through.
template <class T>
void apply_frozen(std::span<const T> z, const CompetitionOutcome& outcome, std::span<T> zhat);

/// Convenience wrappers returning owned vectors.
template <class T>
struct CompetitionResult {
  std::vector<T> activations;
  CompetitionOutcome outcome;
};

template <class T>
CompetitionResult<T> scat_layer(std::size_t k, const std::vector<T>& z) {
  CompetitionResult<T> r{std::vector<T>(z.size()), {}};
  r.outcome = scat_layer<T>(k, std::span<const T>(z), std::span<T>(r.activations));
  return r;
}

template <class T>
CompetitionResult<T> ksparse_layer(std::size_t k, const std::vector<T>& z, bool training, double alpha) {
  CompetitionResult<T> r{std::vector<T>(z.size()), {}};
  r.outcome = ksparse_layer<T>(k, std::span<const T>(z), std::span<T>(r.activations), training, alpha);
  return r;
}

template <class T>
CompetitionResult<T> kate_layer(std::size_t k, double alpha, const std::vector<T>& z) {
  CompetitionResult<T> r{std::vector<T>(z.size()), {}};
  r.outcome = kate_layer<T>(k, alpha, std::span<const T>(z), std::span<T>(r.activations));
  return r;
}

}  // namespace scat::nn
