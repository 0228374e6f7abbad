#include "scat/competition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scat/error.hpp"

namespace scat::nn {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::none: return "none";
    case Variant::scat: return "scat";
    case Variant::ksparse: return "ksparse";
    case Variant::kate: return "kate";
  }
  return "none";
}

Variant variant_from_string(std::string_view s) {
  if (s == "none") return Variant::none;
  if (s == "scat") return Variant::scat;
  if (s == "ksparse") return Variant::ksparse;
  if (s == "kate") return Variant::kate;
  throw ValidationError("unknown variant: " + std::string(s));
}

namespace {

void check_k(std::size_t k, std::size_t h, const char* layer) {
  if (k < 1 || k > h) {
    throw ValidationError(std::string(layer) + ": k=" + std::to_string(k) + " outside [1, " +
                          std::to_string(h) + "]");
  }
}

template <class T>
void check_same_width(std::span<const T> z, std::span<T> zhat) {
  if (z.size() != zhat.size()) throw ValidationError("competition: output width does not match input");
}

// Sorts positions by value descending, lower index first on ties.
template <class T>
void sort_strongest_first(std::vector<std::uint32_t>& idx, std::span<const T> z) {
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (z[a] != z[b]) return z[a] > z[b];
    return a < b;
  });
}

template <class T>
void sort_weakest_first(std::vector<std::uint32_t>& idx, std::span<const T> z) {
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (z[a] != z[b]) return z[a] < z[b];
    return a < b;
  });
}

void sort_indices(CompetitionOutcome& o) {
  std::sort(o.winners_large.begin(), o.winners_large.end());
  std::sort(o.winners_small.begin(), o.winners_small.end());
  std::sort(o.losers.begin(), o.losers.end());
  std::sort(o.negatives.begin(), o.negatives.end());
}

// One pool of same-signed activations: the `quota` entries that rank first
// win, the rest lose and their summed magnitude is returned.
template <class T>
double split_pool(std::vector<std::uint32_t>& pool, std::size_t quota, std::span<const T> z,
                  std::vector<std::uint32_t>& winners, std::vector<std::uint32_t>& losers) {
  T energy = 0;
  for (std::size_t r = 0; r < pool.size(); ++r) {
    if (r < quota) {
      winners.push_back(pool[r]);
    } else {
      losers.push_back(pool[r]);
      energy += std::abs(z[pool[r]]);
    }
  }
  return static_cast<double>(energy);
}

}  // namespace

template <class T>
CompetitionOutcome scat_layer(std::size_t k, std::span<const T> z, std::span<T> zhat) {
  check_k(k, z.size(), "scat_layer");
  check_same_width(z, zhat);
  CompetitionOutcome out;

  std::vector<std::uint32_t> positive;
  for (std::uint32_t j = 0; j < z.size(); ++j) {
    if (z[j] > T(0)) {
      positive.push_back(j);
    } else {
      out.negatives.push_back(j);
    }
  }

  const std::size_t n_large = (k + 1) / 2;
  const std::size_t n_small = k / 2;

  sort_strongest_first(positive, z);
  std::vector<std::uint32_t> rest;
  for (std::size_t r = 0; r < positive.size(); ++r) {
    if (r < n_large) {
      out.winners_large.push_back(positive[r]);
    } else {
      rest.push_back(positive[r]);
    }
  }
  sort_weakest_first(rest, z);
  T energy = 0;
  for (std::size_t r = 0; r < rest.size(); ++r) {
    if (r < n_small) {
      out.winners_small.push_back(rest[r]);
    } else {
      out.losers.push_back(rest[r]);
    }
  }
  sort_indices(out);
  // Summed in index order so the result does not depend on the selection sort.
  for (auto j : out.losers) energy += z[j];

  out.energy = static_cast<double>(energy);
  out.offset_large = out.energy;
  out.offset_small = out.energy;

  std::copy(z.begin(), z.end(), zhat.begin());
  for (auto j : out.winners_large) zhat[j] = z[j] + energy;
  for (auto j : out.winners_small) zhat[j] = z[j] + energy;
  for (auto j : out.losers) zhat[j] = T(0);
  return out;
}

template <class T>
CompetitionOutcome ksparse_layer(std::size_t k, std::span<const T> z, std::span<T> zhat, bool training,
                                 double alpha) {
  check_k(k, z.size(), "ksparse_layer");
  check_same_width(z, zhat);
  std::size_t keep = k;
  if (!training) {
    if (!(alpha > 0.0)) throw ValidationError("ksparse_layer: alpha must be > 0");
    keep = static_cast<std::size_t>(std::floor(static_cast<double>(k) * alpha));
    if (keep < 1 || keep > z.size()) {
      throw ValidationError("ksparse_layer: floor(k*alpha)=" + std::to_string(keep) + " outside [1, " +
                            std::to_string(z.size()) + "]");
    }
  }

  std::vector<std::uint32_t> all(z.size());
  for (std::uint32_t j = 0; j < z.size(); ++j) all[j] = j;
  sort_strongest_first(all, z);

  CompetitionOutcome out;
  for (std::size_t r = 0; r < all.size(); ++r) {
    (r < keep ? out.winners_large : out.losers).push_back(all[r]);
  }
  sort_indices(out);

  std::copy(z.begin(), z.end(), zhat.begin());
  for (auto j : out.losers) zhat[j] = T(0);
  return out;
}

// Positive and negative pools compete separately with quotas ceil(k/2) and
// floor(k/2). Quota a pool cannot use (too few members) moves to the other
// pool, so k >= h is always the identity.
template <class T>
CompetitionOutcome kate_layer(std::size_t k, double alpha, std::span<const T> z, std::span<T> zhat) {
  check_k(k, z.size(), "kate_layer");
  check_same_width(z, zhat);
  if (!(alpha > 0.0)) throw ValidationError("kate_layer: alpha must be > 0");

  CompetitionOutcome out;
  std::vector<std::uint32_t> pos;
  std::vector<std::uint32_t> neg;
  for (std::uint32_t j = 0; j < z.size(); ++j) {
    if (z[j] > T(0)) {
      pos.push_back(j);
    } else if (z[j] < T(0)) {
      neg.push_back(j);
    } else {
      out.negatives.push_back(j);
    }
  }

  std::size_t quota_pos = (k + 1) / 2;
  std::size_t quota_neg = k / 2;
  if (pos.size() < quota_pos) {
    quota_neg += quota_pos - pos.size();
    quota_pos = pos.size();
  } else if (neg.size() < quota_neg) {
    quota_pos += quota_neg - neg.size();
    quota_neg = neg.size();
  }

  sort_strongest_first(pos, z);
  sort_weakest_first(neg, z);  // most negative first
  out.energy = split_pool(pos, quota_pos, z, out.winners_large, out.losers);
  out.energy_negative = split_pool(neg, quota_neg, z, out.winners_small, out.losers);
  sort_indices(out);

  out.offset_large = alpha * out.energy;
  out.offset_small = -alpha * out.energy_negative;

  std::copy(z.begin(), z.end(), zhat.begin());
  const T up = static_cast<T>(out.offset_large);
  const T down = static_cast<T>(out.offset_small);
  for (auto j : out.winners_large) zhat[j] = z[j] + up;
  for (auto j : out.winners_small) zhat[j] = z[j] + down;
  for (auto j : out.losers) zhat[j] = T(0);
  return out;
}

template <class T>
void competition_backward(std::span<const T> grad_zhat, const CompetitionOutcome& outcome,
                          std::span<T> grad_z) {
  if (grad_zhat.size() != grad_z.size() || grad_zhat.size() != outcome.width()) {
    throw ValidationError("competition_backward: shape mismatch");
  }
  std::copy(grad_zhat.begin(), grad_zhat.end(), grad_z.begin());
  for (auto j : outcome.losers) grad_z[j] = T(0);
}

template <class T>
void apply_frozen(std::span<const T> z, const CompetitionOutcome& outcome, std::span<T> zhat) {
  if (z.size() != zhat.size() || z.size() != outcome.width()) {
    throw ValidationError("apply_frozen: shape mismatch");
  }
  std::copy(z.begin(), z.end(), zhat.begin());
  const T up = static_cast<T>(outcome.offset_large);
  const T down = static_cast<T>(outcome.offset_small);
  for (auto j : outcome.winners_large) zhat[j] = z[j] + up;
  for (auto j : outcome.winners_small) zhat[j] = z[j] + down;
  for (auto j : outcome.losers) zhat[j] = T(0);
}

#define SCAT_INSTANTIATE(T)                                                                           \
  template CompetitionOutcome scat_layer<T>(std::size_t, std::span<const T>, std::span<T>);           \
  template CompetitionOutcome ksparse_layer<T>(std::size_t, std::span<const T>, std::span<T>, bool,   \
                                               double);                                               \
  template CompetitionOutcome kate_layer<T>(std::size_t, double, std::span<const T>, std::span<T>);   \
  template void competition_backward<T>(std::span<const T>, const CompetitionOutcome&, std::span<T>); \
  template void apply_frozen<T>(std::span<const T>, const CompetitionOutcome&, std::span<T>);

SCAT_INSTANTIATE(float)
SCAT_INSTANTIATE(double)
#undef SCAT_INSTANTIATE

}  // namespace scat::nn
