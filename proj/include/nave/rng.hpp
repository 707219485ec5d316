#pragma once

#include "nave/core.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

/// Seeding policy: every randomized component takes a 64-bit seed and runs
/// its own std::mt19937_64. Independent streams for experiment cells are
/// derived with splitmix64 over (seed, label hash), so table cells stay
/// deterministic under any execution order.
namespace nave {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Per-cell stream: mixes a master seed with a textual stream label.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  return splitmix64(master ^ fnv1a(label));
}

inline RealVector uniform_vector(int d, double lo, double hi,
                                 std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(lo, hi);
  RealVector v(d);
  for (int i = 0; i < d; ++i) v[i] = dist(gen);
  return v;
}

inline DenseMatrix gaussian_matrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> dist(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(gen);
  return m;
}

inline DenseMatrix uniform_matrix(int rows, int cols, double lo, double hi,
                                  std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(lo, hi);
  DenseMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(gen);
  return m;
}

}  // namespace nave
