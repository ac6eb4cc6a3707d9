#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapsieve/arith.hpp"
#include "gapsieve/census.hpp"
#include "gapsieve/rational_matrix.hpp"

namespace gapsieve {

/// a_j(p) = (p-j-1)/(p-2), with a_1 = 1.
Rational eigenvalue(std::uint32_t j, std::uint64_t p);

/// M_J(p): upper bidiagonal, diagonal a_j(p), superdiagonal b_j(p) = j/(p-2).
struct TransferMatrix {
  std::uint32_t J = 0;
  std::uint64_t p = 0;
  RationalMatrix m;
  bool nonpositive_eigenvalue = false;  // some a_j(p) <= 0, i.e. p <= J+1
};

TransferMatrix build_transfer_matrix(std::uint32_t J, std::uint64_t p);

/// M_J(p) = R * Lambda(p) * L with binomial R and L, L*R = I.
struct EigenStructure {
  std::uint32_t J = 0;
  RationalMatrix R;
  RationalMatrix L;

  RationalMatrix lambda(std::uint64_t p) const;
  bool inverse_pair() const;            // L*R == I
  bool reproduces(std::uint64_t p) const;  // R*Lambda(p)*L == M_J(p)
};

EigenStructure eigenstructure(std::uint32_t J);

/// w at pk from w0 at p0, through R * prod(Lambda) * L. w0 is zero-padded to J.
RatioVector iterate_model(const RatioVector& w0, std::uint64_t p0, std::uint64_t pk, std::uint32_t J);

/// Same result by multiplying the transfer matrices one prime at a time.
RatioVector iterate_model_direct(const RatioVector& w0, std::uint64_t p0, std::uint64_t pk, std::uint32_t J);

/// Limit of w_{g,1}: the sum of the initial ratios, L_1 * w0.
Rational asymptotic_ratio(const RatioVector& w0);

enum class ArithmeticMode { exact, floating };

struct ProductOptions {
  unsigned workers = 1;
  std::string checkpoint_path;  // empty: no checkpoint file
  bool resume = false;
  bool long_run = false;        // required for pk above desk scale
  std::uint64_t checkpoint_every = 1'000'000'000;
};

/// a_j^k = prod over primes p0 < p <= pk of a_j(p), for j = 2..J.
/// Float mode keeps two accumulations: a running product in long double and a
/// compensated sum of log1p terms. They are reported separately so that one
/// can be checked against the other.
struct EigenvalueProducts {
  std::uint64_t p0 = 0;
  std::uint64_t pk = 0;
  std::uint32_t J = 0;
  ArithmeticMode mode = ArithmeticMode::exact;
  std::uint64_t primes_used = 0;
  std::vector<Rational> exact;            // index j-2; exact mode only
  std::vector<long double> product;       // index j-2
  std::vector<long double> from_logs;     // index j-2; float mode only

  long double value(std::uint32_t j) const;
};

/// Largest pk accepted in exact mode; the rationals grow with every prime.
inline constexpr std::uint64_t kExactProductLimit = 100'000;
/// Largest pk accepted without ProductOptions::long_run.
inline constexpr std::uint64_t kDeskProductLimit = 100'000'000;

EigenvalueProducts eigenvalue_products(std::uint64_t p0, std::uint64_t pk, std::uint32_t J, ArithmeticMode mode,
                                       const ProductOptions& options = {});

/// Model evaluated with supplied a_j^k (index j-2), in long double.
std::vector<long double> evolve_with_products(const RatioVector& w0, const std::vector<long double>& ajk);

/// First coordinate of the expansion with a_j^k replaced by x^(exponent_j):
/// sum_j (-1)^(j+1) x^(e_j) (L_j w0), where e_1 = 0.
long double first_coordinate(const RatioVector& w0, long double x, const std::vector<long double>& exponents);

struct CrossoverEstimate {
  bool found = false;
  long double threshold = 0;  // value of a_2^k below which w_{30,1} > w_{6,1}
  std::vector<long double> exponents;
  std::string note;
};

/// Smallest a_2^k in (0,1) where the first coordinates of w_b and w_a agree,
/// under a_j^k ~ (a_2^k)^(j-1).
CrossoverEstimate estimate_primorial_crossover(const RatioVector& w_a, const RatioVector& w_b);

/// Same, with a_j^k ~ (a_2^k)^(alpha_j) and alpha_j = ln a_j^k / ln a_2^k read
/// off a set of computed products (index j-2).
CrossoverEstimate estimate_primorial_crossover(const RatioVector& w_a, const RatioVector& w_b,
                                               const std::vector<long double>& ajk);

}  // namespace gapsieve
