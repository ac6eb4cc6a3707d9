// gapsieve command-line front end.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <streambuf>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <zlib.h>

#include "gapsieve/census.hpp"
#include "gapsieve/cycle.hpp"
#include "gapsieve/cycle_io.hpp"
#include "gapsieve/dynamics.hpp"
#include "gapsieve/errors.hpp"
#include "gapsieve/extension.hpp"
#include "gapsieve/polignac.hpp"
#include "gapsieve/prime_sieve.hpp"
#include "gapsieve/primes_bridge.hpp"
#include "gapsieve/report.hpp"
#include "gapsieve/verify.hpp"

using namespace gapsieve;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kBadInput = 2, kResource = 3, kDomain = 4 };

struct Config {
  std::string format = "csv";
  unsigned threads = 0;
  std::uint64_t max_memory = 2ull << 30;
  std::string out = "-";
  std::string manifest;
  bool stream = false;
  bool long_run = false;
  std::string checkpoint;
  bool resume = false;
};

// Counts bytes and accumulates a crc32 of everything written through it.
class CrcBuf : public std::streambuf {
 public:
  explicit CrcBuf(std::streambuf* sink) : sink_(sink) {}
  std::uint32_t crc() const { return crc_; }
  std::uint64_t bytes() const { return bytes_; }

 protected:
  int_type overflow(int_type ch) override {
    if (traits_type::eq_int_type(ch, traits_type::eof())) return traits_type::not_eof(ch);
    const char c = traits_type::to_char_type(ch);
    return xsputn(&c, 1) == 1 ? ch : traits_type::eof();
  }
  std::streamsize xsputn(const char* s, std::streamsize n) override {
    crc_ = static_cast<std::uint32_t>(::crc32(crc_, reinterpret_cast<const Bytef*>(s), static_cast<uInt>(n)));
    bytes_ += static_cast<std::uint64_t>(n);
    return sink_->sputn(s, n);
  }
  int sync() override { return sink_->pubsync(); }

 private:
  std::streambuf* sink_;
  std::uint32_t crc_ = 0;
  std::uint64_t bytes_ = 0;
};

// Where results go, plus the manifest written once the command finishes.
class Output {
 public:
  Output(const Config& cfg, json config, std::string command)
      : cfg_(cfg), config_(std::move(config)), command_(std::move(command)) {
    if (cfg.out == "-") {
      buf_ = std::make_unique<CrcBuf>(std::cout.rdbuf());
    } else {
      file_.open(cfg.out, std::ios::binary);
      if (!file_) throw ResourceError("cannot open " + cfg.out + " for writing");
      buf_ = std::make_unique<CrcBuf>(file_.rdbuf());
    }
    stream_ = std::make_unique<std::ostream>(buf_.get());
  }

  std::ostream& stream() { return *stream_; }
  bool to_stdout() const { return cfg_.out == "-"; }

  void finish(bool passed) {
    stream_->flush();
    if (file_.is_open()) file_.close();
    std::string path = cfg_.manifest;
    if (path.empty() && !to_stdout()) path = cfg_.out + ".manifest.json";
    if (path.empty()) return;
    json m;
    m["tool"] = "gapsieve";
    m["version"] = GAPSIEVE_VERSION;
    m["command"] = command_;
    m["config"] = config_;
    m["output"] = {{"path", cfg_.out}, {"bytes", buf_->bytes()}, {"crc32", buf_->crc()}};
    m["passed"] = passed;
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write manifest " + path);
    out << m.dump(1) << '\n';
  }

 private:
  const Config& cfg_;
  json config_;
  std::string command_;
  std::ofstream file_;
  std::unique_ptr<CrcBuf> buf_;
  std::unique_ptr<std::ostream> stream_;
};

std::uint64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  if (s.find_first_of("eE.") != std::string::npos) {
    const long double v = std::stold(s, &used);
    const auto n = static_cast<std::uint64_t>(v);
    if (used != s.size() || v < 0 || static_cast<long double>(n) != v) throw InvalidInput("not a whole number: " + s);
    return n;
  }
  const auto n = std::stoull(s, &used);
  if (used != s.size()) throw InvalidInput("not a number: " + s);
  return n;
}

struct Range {
  std::uint64_t lo = 0, hi = 0;
};

Range parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const auto v = parse_count(s);
    return {v, v};
  }
  Range r{parse_count(s.substr(0, dots)), parse_count(s.substr(dots + 2))};
  if (r.hi < r.lo) throw InvalidInput("empty range " + s);
  return r;
}

void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw InvalidInput(std::to_string(p) + " is not prime");
}

std::uint64_t phi_of_primorial(std::uint64_t p) {
  std::uint64_t phi = 1;
  for (auto q : primes_in(2, p)) phi = checked_mul(phi, q - 1, "phi");
  return phi;
}

bool fits(std::uint64_t p, const Config& cfg) { return phi_of_primorial(p) * sizeof(Gap) <= cfg.max_memory; }

// Largest primorial below p whose cycle fits in half the budget, and the
// primes still to be streamed on top of it.
std::pair<std::uint64_t, std::vector<std::uint64_t>> stream_plan(std::uint64_t p, const Config& cfg) {
  std::uint64_t base = 2;
  for (auto q : primes_in(2, p)) {
    if (phi_of_primorial(q) * sizeof(Gap) * 2 <= cfg.max_memory) base = q;
  }
  const auto rest = primes_in(base + 1, p);
  if (rest.size() > 3) throw ResourceError("G(" + std::to_string(p) + "#) needs more than three streamed stages");
  return {base, rest};
}

void stream_primorial(std::uint64_t p, const Config& cfg, const std::function<void(Gap)>& emit) {
  const auto [base, rest] = stream_plan(p, cfg);
  const auto cycle = primorial_cycle(base, cfg.threads);
  stream_stages(cycle, rest, [&](Gap g) {
    emit(g);
    return true;
  });
}

std::string fmt_ld(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}

std::string joined(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
  return s;
}

json rational_vector_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(rational_json(r));
  return a;
}

// Census of G(p#), materialized when it fits, streamed otherwise.
CensusTable census_of(std::uint64_t p, Gap g_max, std::uint32_t j_max, bool periodic, const Config& cfg) {
  if (!cfg.stream && fits(p, cfg)) {
    return driving_term_census(primorial_cycle(p, cfg.threads), g_max, j_max, {cfg.threads, periodic});
  }
  if (periodic) throw InvalidInput("periodic windows need a materialized cycle");
  StreamingCensus sc(primorial(p), g_max, j_max);
  stream_primorial(p, cfg, [&](Gap g) { sc.push(g); });
  return sc.finish();
}

int cmd_build(std::uint64_t p, Config cfg, const std::vector<std::string>& args) {
  require_prime(p);
  if (cfg.out == "-" && args.end() == std::find(args.begin(), args.end(), "--out")) {
    cfg.out = "G" + std::to_string(p) + ".gcyc";
  }
  const auto phi = phi_of_primorial(p);
  if (!cfg.stream && !fits(p, cfg)) {
    throw ResourceError("G(" + std::to_string(p) + "#) has " + std::to_string(phi) +
                        " gaps, over the memory budget; rerun with --stream");
  }
  json conf{{"p", p}, {"stream", cfg.stream}, {"max_memory", cfg.max_memory}};
  Output out(cfg, conf, joined(args));
  CycleFileInfo info;
  if (cfg.stream) {
    info = write_streamed(out.stream(), primorial(p), phi,
                          [&](const std::function<void(Gap)>& emit) { stream_primorial(p, cfg, emit); });
  } else {
    const auto c = primorial_cycle(p, cfg.threads);
    write_cycle(out.stream(), c);
    info = {c.modulus(), c.size(), 0};
  }
  out.finish(true);
  std::ostream& log = out.to_stdout() ? std::cerr : std::cout;
  if (cfg.format == "json") {
    log << json{{"p", p}, {"modulus", primorial(p)}, {"gaps", phi}, {"sum", primorial(p)}, {"path", cfg.out}}.dump()
        << '\n';
  } else {
    log << "G(" << p << "#): " << phi << " gaps summing to " << primorial(p) << " -> " << cfg.out << '\n';
  }
  return kOk;
}

int cmd_census(std::uint64_t p, Gap g_max, std::uint32_t j_max, bool periodic, const Config& cfg,
               const std::vector<std::string>& args) {
  require_prime(p);
  if (p > 23 && !cfg.long_run) throw InvalidInput("census beyond G(23#) is hours-scale; pass --long-run");
  const auto table = census_of(p, g_max, j_max, periodic, cfg);
  Output out(cfg, {{"p", p}, {"gmax", g_max}, {"jmax", j_max}, {"periodic", periodic}}, joined(args));
  if (cfg.format == "json") {
    out.stream() << census_json(table).dump(1) << '\n';
  } else {
    out.stream() << census_csv(table);
  }
  out.finish(true);
  return kOk;
}

RatioVector initial_vector(Gap g, std::uint64_t p0, std::uint32_t J, const Config& cfg) {
  const std::uint32_t j_max = J ? J : std::max<std::uint32_t>(1, g / 2);
  const auto phi = phi_of_primorial(p0);
  const auto table = census_of(p0, g, static_cast<std::uint32_t>(std::min<std::uint64_t>(j_max, phi)), false, cfg);
  return ratio_vector(table, g, j_max);
}

int cmd_model_evolve(Gap g, std::uint64_t p0, std::uint64_t pk, std::uint32_t J, const std::string& mode,
                     const Config& cfg, const std::vector<std::string>& args) {
  require_prime(p0);
  const auto w0 = initial_vector(g, p0, J, cfg);
  const auto dim = static_cast<std::uint32_t>(w0.dimension());
  Output out(cfg, {{"g", g}, {"p0", p0}, {"pk", pk}, {"J", dim}, {"mode", mode}}, joined(args));
  json rows = json::array();
  if (mode == "exact") {
    if (cfg.format == "csv") out.stream() << "p,j,w,w_decimal\n";
    RatioVector w = w0;
    std::uint64_t prev = p0;
    auto emit = [&](std::uint64_t p) {
      if (cfg.format == "csv") {
        for (std::size_t j = 0; j < w.entries.size(); ++j) {
          out.stream() << p << ',' << j + 1 << ',' << rational_csv(w.entries[j]) << '\n';
        }
      } else {
        rows.push_back({{"p", p}, {"w", rational_vector_json(w.entries)}});
      }
    };
    emit(p0);
    for (auto p : primes_in(p0 + 1, pk)) {
      w = iterate_model_direct(w, prev, p, dim);
      prev = p;
      emit(p);
    }
  } else if (mode == "float") {
    ProductOptions po;
    po.workers = cfg.threads;
    po.long_run = cfg.long_run;
    const auto prod = eigenvalue_products(p0, pk, dim, ArithmeticMode::floating, po);
    const auto w = evolve_with_products(w0, prod.product);
    if (cfg.format == "csv") {
      out.stream() << "p,j,w\n";
      for (std::size_t j = 0; j < w.size(); ++j) out.stream() << pk << ',' << j + 1 << ',' << fmt_ld(w[j]) << '\n';
    } else {
      json ws = json::array();
      for (auto v : w) ws.push_back(fmt_ld(v));
      rows.push_back({{"p", pk}, {"w", ws}});
    }
  } else {
    throw InvalidInput("mode must be exact or float");
  }
  if (cfg.format == "json") out.stream() << json{{"g", g}, {"p0", p0}, {"stages", rows}}.dump(1) << '\n';
  out.finish(true);
  return kOk;
}

int cmd_model_ajk(std::uint64_t p0, std::uint64_t pk, std::uint32_t J, const std::string& mode, const Config& cfg,
                  const std::vector<std::string>& args) {
  ProductOptions po;
  po.workers = cfg.threads;
  po.long_run = cfg.long_run;
  po.resume = cfg.resume;
  if (cfg.long_run && cfg.checkpoint.empty()) throw InvalidInput("--long-run needs --checkpoint DIR");
  if (!cfg.checkpoint.empty()) {
    std::filesystem::create_directories(cfg.checkpoint);
    po.checkpoint_path = (std::filesystem::path(cfg.checkpoint) /
                          ("ajk_p0_" + std::to_string(p0) + "_J" + std::to_string(J) + ".json"))
                             .string();
  }
  const auto m = mode == "exact" ? ArithmeticMode::exact : ArithmeticMode::floating;
  if (mode != "exact" && mode != "float") throw InvalidInput("mode must be exact or float");
  const auto r = eigenvalue_products(p0, pk, J, m, po);
  Output out(cfg, {{"p0", p0}, {"pk", pk}, {"J", J}, {"mode", mode}}, joined(args));
  if (cfg.format == "json") {
    json rows = json::array();
    for (std::uint32_t j = 2; j <= J; ++j) {
      json row{{"j", j}, {"a", fmt_ld(r.value(j))}};
      if (m == ArithmeticMode::exact) row["exact"] = rational_json(r.exact[j - 2]);
      if (m == ArithmeticMode::floating) row["from_logs"] = fmt_ld(r.from_logs[j - 2]);
      rows.push_back(row);
    }
    out.stream() << json{{"p0", p0}, {"pk", pk}, {"primes", r.primes_used}, {"a", rows}}.dump(1) << '\n';
  } else {
    out.stream() << (m == ArithmeticMode::exact ? "j,a_jk,a_jk_exact\n" : "j,a_jk,a_jk_from_logs\n");
    for (std::uint32_t j = 2; j <= J; ++j) {
      out.stream() << j << ',' << fmt_ld(r.value(j)) << ','
                   << (m == ArithmeticMode::exact ? fraction_string(r.exact[j - 2]) : fmt_ld(r.from_logs[j - 2]))
                   << '\n';
    }
  }
  out.finish(true);
  return kOk;
}

int cmd_model_crossover(std::uint64_t p0, std::uint32_t J, std::uint64_t pk, const Config& cfg,
                        const std::vector<std::string>& args) {
  const auto w6 = initial_vector(6, p0, J, cfg);
  const auto w30 = initial_vector(30, p0, J, cfg);
  Output out(cfg, {{"p0", p0}, {"J", J}, {"pk", pk}}, joined(args));
  std::vector<std::pair<std::string, CrossoverEstimate>> est;
  est.emplace_back("approximate", estimate_primorial_crossover(w6, w30));
  if (pk) {
    ProductOptions po;
    po.workers = cfg.threads;
    po.long_run = cfg.long_run;
    const auto prod = eigenvalue_products(p0, pk, J, ArithmeticMode::floating, po);
    est.emplace_back("measured_exponents", estimate_primorial_crossover(w6, w30, prod.product));
  }
  if (cfg.format == "json") {
    json a = json::array();
    for (const auto& [name, e] : est) {
      a.push_back({{"variant", name}, {"found", e.found}, {"threshold", fmt_ld(e.threshold)}, {"note", e.note}});
    }
    out.stream() << a.dump(1) << '\n';
  } else {
    out.stream() << "variant,found,threshold\n";
    for (const auto& [name, e] : est) out.stream() << name << ',' << e.found << ',' << fmt_ld(e.threshold) << '\n';
  }
  out.finish(true);
  return kOk;
}

int cmd_asymptote(std::uint64_t from, Range g, const Config& cfg, const std::vector<std::string>& args) {
  require_prime(from);
  const auto lo = static_cast<Gap>(g.lo + g.lo % 2), hi = static_cast<Gap>(g.hi);
  const auto phi = phi_of_primorial(from);
  const auto j_max = static_cast<std::uint32_t>(std::min<std::uint64_t>(std::max<Gap>(1, hi / 2), phi));
  const auto table = census_of(from, hi, j_max, false, cfg);
  Output out(cfg, {{"from_cycle", from}, {"g", {g.lo, g.hi}}}, joined(args));
  bool all = true;
  json rows = json::array();
  if (cfg.format == "csv") out.stream() << "g,w_inf_num,w_inf_den,w_inf_decimal,predicted,agrees\n";
  for (Gap x = std::max<Gap>(2, lo); x <= hi; x += 2) {
    const auto w = asymptotic_ratio(ratio_vector(table, x, j_max));
    const auto hl = ratio_sum_at(x, from);
    const bool ok = w == hl;
    all = all && ok;
    if (cfg.format == "csv") {
      out.stream() << x << ',' << numerator(w) << ',' << denominator(w) << ',' << decimal_string(w) << ','
                   << fraction_string(hl) << ',' << (ok ? "yes" : "no") << '\n';
    } else {
      rows.push_back({{"g", x}, {"w_inf", rational_json(w)}, {"predicted", rational_json(hl)}, {"agrees", ok}});
    }
  }
  if (cfg.format == "json") out.stream() << rows.dump(1) << '\n';
  out.finish(true);
  if (!all) std::cerr << "some rows differ from the closed-form prediction\n";
  return all ? kOk : kCheckFailed;
}

int cmd_polignac_asymptote(Range g, const Config& cfg, const std::vector<std::string>& args) {
  Output out(cfg, {{"g", {g.lo, g.hi}}}, joined(args));
  json rows = json::array();
  if (cfg.format == "csv") out.stream() << "g,ratio,ratio_decimal\n";
  for (std::uint64_t x = std::max<std::uint64_t>(2, g.lo + g.lo % 2); x <= g.hi; x += 2) {
    const auto r = hl_asymptotic_ratio(x);
    if (cfg.format == "csv") {
      out.stream() << x << ',' << rational_csv(r) << '\n';
    } else {
      rows.push_back({{"g", x}, {"ratio", rational_json(r)}});
    }
  }
  if (cfg.format == "json") out.stream() << rows.dump(1) << '\n';
  out.finish(true);
  return kOk;
}

// Census cross-checks at p#: ratio sums against the closed product, the
// closed driving-term totals and the qN invariance for the next prime.
int cmd_polignac_verify(std::uint64_t p, Gap g_max, const Config& cfg, const std::vector<std::string>& args) {
  require_prime(p);
  const auto cycle = primorial_cycle(p, cfg.threads);
  const Constellation two({2});
  const auto n2 = count_constellation(cycle, two);
  std::vector<CheckResult> checks;
  for (Gap g = 2; g <= g_max; g += 2) {
    const auto total = count_driving_terms(cycle, g);
    const Rational got(total, n2), want = ratio_sum_at(g, p);
    checks.push_back({"ratio_sum g=" + std::to_string(g), got == want, fraction_string(got) + " vs " + fraction_string(want)});
    const auto rad = radical(g);
    if (rad.qbar == p) {
      const auto closed = driving_term_total(g);
      checks.push_back({"driving_total g=" + std::to_string(g), BigInt(total) == closed,
                        std::to_string(total) + " vs " + closed.str()});
    }
  }
  const auto q = next_prime(cycle);
  if (phi_of_primorial(q) * sizeof(Gap) <= cfg.max_memory) {
    for (Gap g : {Gap(2), Gap(6), Gap(2 * q), Gap(30)}) {
      const auto r = verify_qn_invariance(cycle, q, g, cfg.threads);
      checks.push_back({"invariance q=" + std::to_string(q) + " g=" + std::to_string(g), r.holds(),
                        std::to_string(r.before) + " -> " + std::to_string(r.after) + " factor " +
                            std::to_string(r.factor)});
    }
  }
  bool all = true;
  Output out(cfg, {{"p", p}, {"gmax", g_max}}, joined(args));
  json rows = json::array();
  if (cfg.format == "csv") out.stream() << "check,passed,detail\n";
  for (const auto& c : checks) {
    all = all && c.passed;
    if (cfg.format == "csv") {
      out.stream() << c.name << ',' << (c.passed ? "PASS" : "FAIL") << ',' << c.detail << '\n';
    } else {
      rows.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
  }
  if (cfg.format == "json") out.stream() << rows.dump(1) << '\n';
  out.finish(all);
  return all ? kOk : kCheckFailed;
}

int cmd_survivors(std::uint64_t p, bool annotate, std::uint64_t up_to, const Config& cfg,
                  const std::vector<std::string>& args) {
  require_prime(p);
  const auto cycle = primorial_cycle(p, cfg.threads);
  const auto s = survivors(cycle);
  Output out(cfg, {{"p", p}, {"annotate", annotate}, {"up_to", up_to}}, joined(args));
  if (annotate) {
    if (!up_to) up_to = next_prime_after(isqrt(cycle.modulus() + 1));
    const auto t = closure_trace(cycle, up_to);
    out.stream() << (cfg.format == "json" ? render_trace_json(t) + "\n" : render_trace_text(t));
  } else if (cfg.format == "json") {
    out.stream() << json{{"p", p},           {"from", s.next_prime},      {"last", s.last_value},
                         {"gaps", s.gaps},   {"oracle_count", s.oracle_count}, {"matched", s.all_matched()}}
                        .dump(1)
                 << '\n';
  } else {
    out.stream() << "# survivors of G(" << p << "#) from " << s.next_prime << " to " << s.last_value << '\n';
    for (std::size_t i = 0; i < s.gaps.size(); ++i) out.stream() << (i ? "," : "") << s.gaps[i];
    out.stream() << '\n';
  }
  out.finish(s.all_matched());
  return s.all_matched() ? kOk : kCheckFailed;
}

int cmd_verify(std::uint64_t max_prime, const Config& cfg, const std::vector<std::string>& args) {
  const auto results = run_invariant_suite({max_prime, cfg.threads});
  bool all = true;
  Output out(cfg, {{"max_prime", max_prime}}, joined(args));
  json rows = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    if (cfg.format == "json") {
      rows.push_back({{"check", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    } else {
      out.stream() << (r.passed ? "PASS " : "FAIL ") << r.name << (r.detail.empty() ? "" : ": " + r.detail) << '\n';
    }
  }
  if (cfg.format == "json") out.stream() << rows.dump(1) << '\n';
  out.finish(all);
  return all ? kOk : kCheckFailed;
}

unsigned default_threads() {
  if (const char* env = std::getenv("GAPSIEVE_THREADS")) {
    try {
      const auto n = std::stoul(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring GAPSIEVE_THREADS=" << env << '\n';
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycles of gaps in Eratosthenes sieve: construction, census, dynamics and Polignac ratios"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GAPSIEVE_VERSION);

  Config cfg;
  cfg.threads = default_threads();
  std::string max_memory = std::to_string(cfg.max_memory);
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (env GAPSIEVE_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--max-memory", max_memory, "Materialization budget in bytes")->capture_default_str();
  app.add_option("--out", cfg.out, "Output path, - for stdout")->capture_default_str();
  app.add_option("--manifest", cfg.manifest, "Manifest path (default: <out>.manifest.json)");
  app.add_flag("--stream", cfg.stream, "Stream the cycle instead of materializing it");
  app.add_flag("--long-run", cfg.long_run, "Allow hours-scale computations");
  app.add_option("--checkpoint", cfg.checkpoint, "Checkpoint directory");
  app.add_flag("--resume", cfg.resume, "Resume from the checkpoint");
  app.fallthrough();

  std::uint64_t p = 0, p0 = 13, max_prime = 19, up_to = 0;
  std::string pk_str, g_str = "2..32", mode = "exact";
  Gap g = 6, g_max = 32;
  std::uint32_t j_max = 9, J = 0;
  bool periodic = false, annotate = false;

  auto* build = app.add_subcommand("build", "Write G(p#) to a binary cycle file");
  build->add_option("--p", p, "Sieve prime")->required();

  auto* census = app.add_subcommand("census", "Table of n_{g,j}");
  census->add_option("--p", p, "Sieve prime")->required();
  census->add_option("--gmax", g_max, "Largest gap sum")->capture_default_str();
  census->add_option("--jmax", j_max, "Longest window")->capture_default_str();
  census->add_flag("--periodic", periodic, "Allow windows longer than the cycle");

  auto* model = app.add_subcommand("model", "Population model");
  model->require_subcommand(1);
  auto* evolve = model->add_subcommand("evolve", "Evolve w_g from G(p0#)");
  evolve->add_option("--g", g, "Gap")->required();
  evolve->add_option("--p0", p0, "Initial stage")->capture_default_str();
  evolve->add_option("--pk", pk_str, "Final prime")->required();
  evolve->add_option("--J", J, "Dimension (default g/2)");
  evolve->add_option("--mode", mode, "exact or float")->capture_default_str();
  auto* ajk = model->add_subcommand("ajk", "Eigenvalue products a_j^k");
  ajk->add_option("--p0", p0, "Initial stage")->capture_default_str();
  ajk->add_option("--pk", pk_str, "Final prime bound")->required();
  ajk->add_option("--J", J, "Largest j (default 9)");
  ajk->add_option("--mode", mode, "exact or float (default float)");
  auto* crossover = model->add_subcommand("crossover", "Where w_30,1 overtakes w_6,1");
  crossover->add_option("--p0", p0, "Initial stage")->capture_default_str();
  crossover->add_option("--J", J, "Dimension (default 9)");
  crossover->add_option("--pk", pk_str, "Also fit exponents to products up to pk");
  auto* masym = model->add_subcommand("asymptote", "Asymptotic ratios from a census");
  masym->add_option("--from-cycle", p0, "Stage of the initial census")->capture_default_str();
  masym->add_option("--g", g_str, "Gap range lo..hi")->capture_default_str();

  auto* asym = app.add_subcommand("asymptote", "Asymptotic ratios from a census");
  asym->add_option("--from-cycle", p0, "Stage of the initial census")->capture_default_str();
  asym->add_option("--g", g_str, "Gap range lo..hi")->capture_default_str();

  auto* polignac = app.add_subcommand("polignac", "Closed-form ratios");
  polignac->require_subcommand(1);
  auto* pasym = polignac->add_subcommand("asymptote", "Product over odd q | g of (q-1)/(q-2)");
  pasym->add_option("--g", g_str, "Gap range lo..hi")->capture_default_str();
  auto* pverify = polignac->add_subcommand("verify", "Census cross-checks at p#");
  pverify->add_option("--p", p, "Sieve prime")->required();
  pverify->add_option("--gmax", g_max, "Largest gap checked")->capture_default_str();

  auto* surv = app.add_subcommand("survivors", "Front of G(p#) made of true prime gaps");
  surv->add_option("--p", p, "Sieve prime")->required();
  surv->add_flag("--annotate", annotate, "Closure trace over the segment 1..N+1");
  surv->add_option("--up-to", up_to, "Last sieving prime of the trace");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--max-prime", max_prime, "Largest stage built")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadInput;
  }

  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    cfg.max_memory = parse_count(max_memory);
    if (*build) return cmd_build(p, cfg, args);
    if (*census) return cmd_census(p, g_max, j_max, periodic, cfg, args);
    if (*evolve) return cmd_model_evolve(g, p0, parse_count(pk_str), J, mode, cfg, args);
    if (*ajk) return cmd_model_ajk(p0, parse_count(pk_str), J ? J : 9, ajk->count("--mode") ? mode : "float", cfg, args);
    if (*crossover) return cmd_model_crossover(p0, J ? J : 9, pk_str.empty() ? 0 : parse_count(pk_str), cfg, args);
    if (*masym) return cmd_asymptote(p0, parse_range(g_str), cfg, args);
    if (*asym) return cmd_asymptote(p0, parse_range(g_str), cfg, args);
    if (*pasym) return cmd_polignac_asymptote(parse_range(g_str), cfg, args);
    if (*pverify) return cmd_polignac_verify(p, g_max, cfg, args);
    if (*surv) return cmd_survivors(p, annotate, up_to, cfg, args);
    if (*verify) return cmd_verify(max_prime, cfg, args);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kBadInput;
}
