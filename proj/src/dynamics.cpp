#include "gapsieve/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include "gapsieve/errors.hpp"
#include "gapsieve/prime_sieve.hpp"

namespace gapsieve {

namespace {

void require_prime(std::uint64_t p, const char* what) {
  if (!is_prime(p)) throw InvalidInput(std::string(what) + " must be prime, got " + std::to_string(p));
}

std::vector<std::vector<BigInt>> pascal(std::uint32_t n) {
  std::vector<std::vector<BigInt>> c(n, std::vector<BigInt>(n, 0));
  for (std::uint32_t i = 0; i < n; ++i) {
    c[i][0] = 1;
    for (std::uint32_t k = 1; k <= i; ++k) c[i][k] = c[i - 1][k - 1] + (k < i ? c[i - 1][k] : BigInt(0));
  }
  return c;
}

std::vector<Rational> padded(const RatioVector& w0, std::uint32_t J) {
  std::vector<Rational> v(J);
  for (std::size_t i = 0; i < w0.entries.size(); ++i) {
    if (i < J) {
      v[i] = w0.entries[i];
    } else if (w0.entries[i] != 0) {
      throw InvalidInput("initial vector has nonzero entries beyond J = " + std::to_string(J));
    }
  }
  return v;
}

std::uint64_t primorial_or_zero(std::uint64_t p) {
  try {
    return primorial(p);
  } catch (const OverflowError&) {
    return 0;
  }
}

void check_model_range(std::uint64_t p0, std::uint64_t pk, std::uint32_t J) {
  require_prime(p0, "p0");
  require_prime(pk, "pk");
  if (pk < p0) throw InvalidInput("pk must not precede p0");
  if (J == 0) throw InvalidInput("J must be at least 1");
}

}  // namespace

Rational eigenvalue(std::uint32_t j, std::uint64_t p) {
  if (p == 2) throw DomainError("a_j(p) is undefined at p = 2");
  if (j == 1) return Rational(1);
  return Rational(static_cast<std::int64_t>(p) - static_cast<std::int64_t>(j) - 1, static_cast<std::int64_t>(p - 2));
}

TransferMatrix build_transfer_matrix(std::uint32_t J, std::uint64_t p) {
  if (J == 0) throw InvalidInput("J must be at least 1");
  if (p == 2) throw DomainError("M_J(2) divides by p - 2 = 0");
  require_prime(p, "p");
  TransferMatrix t;
  t.J = J;
  t.p = p;
  t.m = RationalMatrix(J, J);
  for (std::uint32_t j = 1; j <= J; ++j) {
    t.m(j - 1, j - 1) = eigenvalue(j, p);
    if (t.m(j - 1, j - 1) <= 0) t.nonpositive_eigenvalue = true;
    if (j < J) t.m(j - 1, j) = Rational(j, p - 2);
  }
  return t;
}

RationalMatrix EigenStructure::lambda(std::uint64_t p) const {
  RationalMatrix d(J, J);
  for (std::uint32_t j = 1; j <= J; ++j) d(j - 1, j - 1) = eigenvalue(j, p);
  return d;
}

bool EigenStructure::inverse_pair() const { return L * R == RationalMatrix::identity(J); }

bool EigenStructure::reproduces(std::uint64_t p) const { return R * lambda(p) * L == build_transfer_matrix(J, p).m; }

EigenStructure eigenstructure(std::uint32_t J) {
  if (J == 0) throw InvalidInput("J must be at least 1");
  const auto c = pascal(J);
  EigenStructure e;
  e.J = J;
  e.R = RationalMatrix(J, J);
  e.L = RationalMatrix(J, J);
  for (std::uint32_t i = 0; i < J; ++i) {
    for (std::uint32_t j = i; j < J; ++j) {
      e.L(i, j) = Rational(c[j][i]);
      e.R(i, j) = (i + j) % 2 == 0 ? Rational(c[j][i]) : Rational(-c[j][i]);
    }
  }
  return e;
}

RatioVector iterate_model(const RatioVector& w0, std::uint64_t p0, std::uint64_t pk, std::uint32_t J) {
  check_model_range(p0, pk, J);
  const auto e = eigenstructure(J);
  auto coeff = e.L.apply(padded(w0, J));
  std::vector<Rational> prod(J, Rational(1));
  for_each_prime(p0 + 1, pk, [&](std::uint64_t p) {
    for (std::uint32_t j = 2; j <= J; ++j) prod[j - 1] *= eigenvalue(j, p);
  });
  for (std::uint32_t j = 0; j < J; ++j) coeff[j] *= prod[j];
  RatioVector out;
  out.g = w0.g;
  out.basis_modulus = primorial_or_zero(pk);
  out.entries = e.R.apply(coeff);
  return out;
}

RatioVector iterate_model_direct(const RatioVector& w0, std::uint64_t p0, std::uint64_t pk, std::uint32_t J) {
  check_model_range(p0, pk, J);
  auto w = padded(w0, J);
  for_each_prime(p0 + 1, pk, [&](std::uint64_t p) { w = build_transfer_matrix(J, p).m.apply(w); });
  RatioVector out;
  out.g = w0.g;
  out.basis_modulus = primorial_or_zero(pk);
  out.entries = std::move(w);
  return out;
}

Rational asymptotic_ratio(const RatioVector& w0) { return w0.sum(); }

long double EigenvalueProducts::value(std::uint32_t j) const {
  if (j == 1) return 1.0L;
  if (j < 2 || j > J) throw InvalidInput("eigenvalue index out of range");
  return mode == ArithmeticMode::exact ? to_long_double(exact[j - 2]) : product[j - 2];
}

namespace {

struct Neumaier {
  long double sum = 0;
  long double comp = 0;

  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + comp; }
};

// Accumulators for one j. A zero factor pins the product at zero; negative
// factors (p <= j) flip the sign and contribute log|a| to the sum.
struct Accum {
  long double product = 1;
  Neumaier logs;
  bool zero = false;
  bool negative = false;

  void factor(std::uint64_t p, std::uint32_t j) {
    const auto num = static_cast<long double>(static_cast<std::int64_t>(p) - static_cast<std::int64_t>(j) - 1);
    const auto den = static_cast<long double>(p - 2);
    product *= num / den;
    if (num == 0) {
      zero = true;
    } else if (num < 0) {
      negative = !negative;
      logs.add(std::log(-num / den));
    } else {
      logs.add(std::log1p(-static_cast<long double>(j - 1) / den));
    }
  }

  void merge(const Accum& b) {
    product *= b.product;
    logs.add(b.logs.sum);
    logs.add(b.logs.comp);
    zero = zero || b.zero;
    negative = negative != b.negative;
  }

  long double from_logs() const {
    if (zero) return 0;
    const long double v = std::exp(logs.value());
    return negative ? -v : v;
  }
};

struct Block {
  std::vector<Accum> acc;
  std::uint64_t primes = 0;
};

constexpr std::uint64_t kBlockSpan = 10'000'000;

Block run_block(std::uint64_t lo, std::uint64_t hi, std::uint32_t J) {
  Block b;
  b.acc.resize(J + 1);
  for_each_prime(lo, hi, [&](std::uint64_t p) {
    ++b.primes;
    for (std::uint32_t j = 2; j <= J; ++j) b.acc[j].factor(p, j);
  });
  return b;
}

std::string hexfloat(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%La", x);
  return buf;
}

long double parse_hexfloat(const std::string& s) {
  char* end = nullptr;
  const long double v = std::strtold(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw FormatError("bad hexfloat in checkpoint: " + s);
  return v;
}

struct Checkpoint {
  std::uint64_t next = 0;
  Block state;
};

void save_checkpoint(const std::string& path, std::uint64_t p0, std::uint32_t J, const Checkpoint& c) {
  nlohmann::json j;
  j["p0"] = p0;
  j["J"] = J;
  j["next"] = c.next;
  j["primes"] = c.state.primes;
  for (std::uint32_t k = 2; k <= J; ++k) {
    const Accum& a = c.state.acc[k];
    j["acc"].push_back({{"j", k},
                        {"product", hexfloat(a.product)},
                        {"log_sum", hexfloat(a.logs.sum)},
                        {"log_comp", hexfloat(a.logs.comp)},
                        {"zero", a.zero},
                        {"negative", a.negative}});
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ResourceError("cannot write checkpoint " + tmp);
    out << j.dump(1) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::optional<Checkpoint> load_checkpoint(const std::string& path, std::uint64_t p0, std::uint32_t J) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("unreadable checkpoint " + path + ": " + e.what());
  }
  if (j.at("p0").get<std::uint64_t>() != p0 || j.at("J").get<std::uint32_t>() != J) {
    throw InvalidInput("checkpoint " + path + " was written for a different p0 or J");
  }
  Checkpoint c;
  c.next = j.at("next").get<std::uint64_t>();
  c.state.primes = j.at("primes").get<std::uint64_t>();
  c.state.acc.resize(J + 1);
  for (const auto& a : j.at("acc")) {
    const auto k = a.at("j").get<std::uint32_t>();
    if (k < 2 || k > J) throw FormatError("checkpoint index out of range");
    Accum& acc = c.state.acc[k];
    acc.product = parse_hexfloat(a.at("product").get<std::string>());
    acc.logs.sum = parse_hexfloat(a.at("log_sum").get<std::string>());
    acc.logs.comp = parse_hexfloat(a.at("log_comp").get<std::string>());
    acc.zero = a.at("zero").get<bool>();
    acc.negative = a.at("negative").get<bool>();
  }
  return c;
}

EigenvalueProducts exact_products(std::uint64_t p0, std::uint64_t pk, std::uint32_t J) {
  if (pk > kExactProductLimit) {
    throw ResourceError("exact eigenvalue products are limited to pk <= " + std::to_string(kExactProductLimit));
  }
  EigenvalueProducts r;
  r.exact.assign(J > 1 ? J - 1 : 0, Rational(1));
  for_each_prime(p0 + 1, pk, [&](std::uint64_t p) {
    ++r.primes_used;
    for (std::uint32_t j = 2; j <= J; ++j) r.exact[j - 2] *= eigenvalue(j, p);
  });
  for (const auto& e : r.exact) r.product.push_back(to_long_double(e));
  return r;
}

EigenvalueProducts float_products(std::uint64_t p0, std::uint64_t pk, std::uint32_t J, const ProductOptions& opt) {
  if (pk > kDeskProductLimit && !opt.long_run) {
    throw InvalidInput("pk = " + std::to_string(pk) + " needs the long-run mode");
  }
  if (opt.checkpoint_every % kBlockSpan != 0) {
    throw InvalidInput("checkpoint interval must be a multiple of " + std::to_string(kBlockSpan));
  }
  Checkpoint cur;
  cur.next = p0 + 1;
  cur.state.acc.resize(J + 1);
  if (opt.resume && !opt.checkpoint_path.empty()) {
    if (auto c = load_checkpoint(opt.checkpoint_path, p0, J)) {
      if (c->next > pk + 1) throw InvalidInput("checkpoint lies past the requested pk");
      cur = std::move(*c);
    }
  }
  // Blocks are aligned to absolute multiples of kBlockSpan, so the
  // combination order does not depend on the worker count or on resumes.
  const unsigned workers = std::max(1u, opt.workers);
  while (cur.next <= pk) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    std::uint64_t lo = cur.next;
    while (ranges.size() < workers && lo <= pk) {
      const std::uint64_t hi = std::min(pk, (lo / kBlockSpan + 1) * kBlockSpan - 1);
      ranges.emplace_back(lo, hi);
      lo = hi + 1;
      if (!opt.checkpoint_path.empty() && lo % opt.checkpoint_every == 0) break;
    }
    std::vector<Block> blocks(ranges.size());
    if (ranges.size() == 1) {
      blocks[0] = run_block(ranges[0].first, ranges[0].second, J);
    } else {
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(ranges.size());
      for (std::size_t i = 0; i < ranges.size(); ++i) {
        threads.emplace_back([&, i] {
          try {
            blocks[i] = run_block(ranges[i].first, ranges[i].second, J);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        });
      }
      for (auto& t : threads) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    for (const auto& b : blocks) {
      for (std::uint32_t j = 2; j <= J; ++j) cur.state.acc[j].merge(b.acc[j]);
      cur.state.primes += b.primes;
    }
    cur.next = lo;
    if (!opt.checkpoint_path.empty() && (lo % opt.checkpoint_every == 0 || lo > pk)) {
      save_checkpoint(opt.checkpoint_path, p0, J, cur);
    }
  }
  EigenvalueProducts r;
  r.primes_used = cur.state.primes;
  for (std::uint32_t j = 2; j <= J; ++j) {
    r.product.push_back(cur.state.acc[j].product);
    r.from_logs.push_back(cur.state.acc[j].from_logs());
  }
  return r;
}

}  // namespace

EigenvalueProducts eigenvalue_products(std::uint64_t p0, std::uint64_t pk, std::uint32_t J, ArithmeticMode mode,
                                       const ProductOptions& options) {
  require_prime(p0, "p0");
  if (pk < p0) throw InvalidInput("pk must not precede p0");
  if (J == 0) throw InvalidInput("J must be at least 1");
  auto r = mode == ArithmeticMode::exact ? exact_products(p0, pk, J) : float_products(p0, pk, J, options);
  r.p0 = p0;
  r.pk = pk;
  r.J = J;
  r.mode = mode;
  return r;
}

std::vector<long double> evolve_with_products(const RatioVector& w0, const std::vector<long double>& ajk) {
  const auto J = static_cast<std::uint32_t>(w0.dimension());
  if (J == 0) throw InvalidInput("empty initial vector");
  if (ajk.size() + 1 < J) throw InvalidInput("need a_j^k for every j up to the vector dimension");
  const auto c = pascal(J);
  std::vector<long double> w(J), coeff(J, 0), out(J, 0);
  for (std::uint32_t i = 0; i < J; ++i) w[i] = to_long_double(w0.entries[i]);
  for (std::uint32_t i = 0; i < J; ++i) {
    for (std::uint32_t j = i; j < J; ++j) coeff[i] += static_cast<long double>(c[j][i]) * w[j];
    if (i > 0) coeff[i] *= ajk[i - 1];
  }
  for (std::uint32_t i = 0; i < J; ++i) {
    for (std::uint32_t j = i; j < J; ++j) {
      const auto r = static_cast<long double>(c[j][i]);
      out[i] += ((i + j) % 2 == 0 ? r : -r) * coeff[j];
    }
  }
  return out;
}

long double first_coordinate(const RatioVector& w0, long double x, const std::vector<long double>& exponents) {
  const auto J = static_cast<std::uint32_t>(w0.dimension());
  if (exponents.size() < J) throw InvalidInput("need an exponent for every coordinate");
  const auto c = pascal(J);
  long double total = 0;
  for (std::uint32_t i = 0; i < J; ++i) {
    long double li = 0;
    for (std::uint32_t j = i; j < J; ++j) li += static_cast<long double>(c[j][i]) * to_long_double(w0.entries[j]);
    const long double term = std::pow(x, exponents[i]) * li;
    total += i % 2 == 0 ? term : -term;
  }
  return total;
}

namespace {

CrossoverEstimate solve_crossover(const RatioVector& w_a, const RatioVector& w_b, std::vector<long double> exponents) {
  const std::uint32_t J = static_cast<std::uint32_t>(std::max(w_a.dimension(), w_b.dimension()));
  RatioVector a = w_a, b = w_b;
  a.entries.resize(J, Rational(0));
  b.entries.resize(J, Rational(0));
  CrossoverEstimate est;
  est.exponents = exponents;
  if (a.entries == b.entries) {
    est.note = "vectors agree; no crossover";
    return est;
  }
  auto f = [&](long double x) {
    return first_coordinate(b, x, exponents) - first_coordinate(a, x, exponents);
  };
  constexpr int kGrid = 100000;
  long double prev_x = 0;
  long double prev = f(prev_x);
  for (int i = 1; i < kGrid; ++i) {
    const long double x = static_cast<long double>(i) / kGrid;
    const long double cur = f(x);
    if (cur == 0) {
      est.found = true;
      est.threshold = x;
      return est;
    }
    if ((prev < 0) != (cur < 0) && prev != 0) {
      boost::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<long double>(60);
      auto [lo, hi] = boost::math::tools::toms748_solve(f, prev_x, x, prev, cur, tol, iters);
      est.found = true;
      est.threshold = (lo + hi) / 2;
      return est;
    }
    prev_x = x;
    prev = cur;
  }
  est.note = "no sign change in (0,1)";
  return est;
}

}  // namespace

CrossoverEstimate estimate_primorial_crossover(const RatioVector& w_a, const RatioVector& w_b) {
  const std::size_t J = std::max(w_a.dimension(), w_b.dimension());
  std::vector<long double> exponents(J);
  for (std::size_t j = 0; j < J; ++j) exponents[j] = static_cast<long double>(j);
  return solve_crossover(w_a, w_b, std::move(exponents));
}

CrossoverEstimate estimate_primorial_crossover(const RatioVector& w_a, const RatioVector& w_b,
                                               const std::vector<long double>& ajk) {
  const std::size_t J = std::max(w_a.dimension(), w_b.dimension());
  if (ajk.size() + 1 < J) throw InvalidInput("need a_j^k for every j up to the vector dimension");
  if (J >= 2 && !(ajk[0] > 0 && ajk[0] < 1)) throw InvalidInput("a_2^k must lie in (0,1)");
  std::vector<long double> exponents(J, 0);
  for (std::size_t j = 1; j < J; ++j) {
    if (!(ajk[j - 1] > 0)) throw InvalidInput("a_j^k must be positive");
    exponents[j] = std::log(ajk[j - 1]) / std::log(ajk[0]);
  }
  return solve_crossover(w_a, w_b, std::move(exponents));
}

}  // namespace gapsieve
