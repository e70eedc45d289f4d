// arf — batch driver for the multiplicative-weight correlation laboratory.
//
// One subcommand per operation; CSV ladders ("n,value") or JSON documents,
// every output prefixed with the code version and a config echo that
// reproduces the numbers (thread count and file paths deliberately not
// echoed, so runs with different --threads are byte-identical).
//
// Exit codes: 0 ok, 2 usage (bad flags, unknown subcommand, coverage),
// 3 resource/cache-format trouble, 4 internal oracle mismatch.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arf/correlation.hpp"
#include "arf/dynamics.hpp"
#include "arf/errors.hpp"
#include "arf/expsum.hpp"
#include "arf/fit.hpp"
#include "arf/gowers.hpp"
#include "arf/parallel.hpp"
#include "arf/phase.hpp"
#include "arf/report.hpp"
#include "arf/sieve.hpp"
#include "arf/table_io.hpp"
#include "arf/version.hpp"

namespace {

using nlohmann::json;

// ---------------------------------------------------------------- plumbing

struct Common {
  std::string out;        // "" = stdout
  std::string plot;       // gnuplot script path, CSV subcommands only
  std::string cache_dir;  // default: $ARF_CACHE_DIR or ./arf-cache
  unsigned threads = 0;   // 0 = all hardware threads
  std::uint64_t budget = arf::SieveOptions{}.budget;
  std::uint64_t segment = arf::SieveOptions{}.segment;
};

void add_common(CLI::App* sub, Common& c, bool with_plot, bool with_cache) {
  sub->add_option("--out", c.out, "output file (default: stdout)");
  if (with_plot)
    sub->add_option("--plot", c.plot,
                    "write a gnuplot script here (requires --out)");
  if (with_cache) {
    sub->add_option("--cache-dir", c.cache_dir,
                    "sieve cache directory (default: $ARF_CACHE_DIR or "
                    "./arf-cache)");
    sub->add_option("--budget", c.budget, "sieve budget (largest index)");
    sub->add_option("--segment", c.segment, "sieve segment length");
  }
  sub->add_option("--threads", c.threads,
                  "worker thread cap, 0 = all cores (never affects values)");
}

std::filesystem::path cache_dir(const Common& c) {
  if (!c.cache_dir.empty()) return c.cache_dir;
  if (const char* env = std::getenv("ARF_CACHE_DIR"); env && *env)
    return env;
  return "arf-cache";
}

arf::SieveOptions sieve_opts(const Common& c) {
  arf::SieveOptions o;
  o.budget = c.budget;
  o.segment = c.segment;
  return o;
}

arf::FunctionTable fetch(const Common& c, const std::string& kind_name,
                         std::uint64_t limit) {
  return arf::cached_table(arf::kind_from_name(kind_name), limit,
                           cache_dir(c), sieve_opts(c));
}

void write_out(const Common& c,
               const std::function<void(std::ostream&)>& writer) {
  if (c.out.empty()) {
    writer(std::cout);
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw arf::resource_error("cannot open output file: " + c.out);
  writer(f);
  f.flush();
  if (!f) throw arf::resource_error("write failed: " + c.out);
}

void maybe_plot(const Common& c, const std::string& title, bool logx,
                bool logy) {
  if (c.plot.empty()) return;
  if (c.out.empty())
    throw arf::usage_error("--plot requires --out (the script references "
                           "the CSV file)");
  std::ofstream f(c.plot, std::ios::binary);
  if (!f) throw arf::resource_error("cannot open plot script: " + c.plot);
  arf::write_gnuplot(f, c.out, title, logx, logy);
}

// Fit sidecar "<out>.fit.json" for ladder commands; written only when the
// CSV went to a file. Fewer than 4 positive points -> degenerate stub.
void fit_sidecar(const Common& c, const json& config,
                 const std::vector<std::pair<double, double>>& points) {
  if (c.out.empty()) return;
  json fj;
  std::vector<std::pair<double, double>> pos;
  for (const auto& p : points)
    if (p.second > 0) pos.push_back(p);
  if (pos.size() >= 4) {
    try {
      fj = arf::fit_to_json(arf::fit_best(pos));
    } catch (const arf::usage_error& e) {
      fj["flag"] = "degenerate";
      fj["reason"] = e.what();
    }
  } else {
    fj["flag"] = "degenerate";
    fj["reason"] = "need at least 4 positive points for a decay fit";
  }
  const std::string path = c.out + ".fit.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw arf::resource_error("cannot open fit sidecar: " + path);
  arf::write_json_doc(f, config, fj);
}

// ------------------------------------------------------------- arg parsing

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

// Positive integer, accepting scientific shorthand ("1e6", "2.5e3").
std::uint64_t parse_count(const std::string& tok) {
  const std::string t = trim(tok);
  double v = 0;
  std::size_t pos = 0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (t.empty() || pos != t.size() || !(v >= 1) || v > 9.0e18 ||
      v != std::floor(v))
    throw arf::usage_error("bad count '" + tok +
                           "' (want a positive integer; 1e6 style is fine)");
  return static_cast<std::uint64_t>(v);
}

double parse_real(const std::string& tok) {
  const std::string t = trim(tok);
  if (t == "golden") return arf::golden_alpha;
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (t.empty() || pos != t.size() || !std::isfinite(v))
    throw arf::usage_error("bad number '" + tok + "'");
  return v;
}

long long parse_integer(const std::string& tok) {
  const std::string t = trim(tok);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (t.empty() || pos != t.size())
    throw arf::usage_error("bad integer '" + tok + "'");
  return v;
}

// "start:stop:xFACTOR" (geometric, rounded to nearest integer) or a comma
// list; single values allowed.
std::vector<std::uint64_t> parse_ladder(const std::string& spec) {
  std::vector<std::uint64_t> out;
  if (spec.find(':') != std::string::npos) {
    auto parts = split(spec, ':');
    if (parts.size() != 3)
      throw arf::usage_error("ladder must be start:stop:xFACTOR or a comma "
                             "list");
    const std::string f = trim(parts[2]);
    if (f.size() < 2 || (f[0] != 'x' && f[0] != 'X'))
      throw arf::usage_error("ladder factor must look like x4 or x2.5");
    const std::uint64_t start = parse_count(parts[0]);
    const std::uint64_t stop = parse_count(parts[1]);
    const double factor = parse_real(f.substr(1));
    if (!(factor > 1)) throw arf::usage_error("ladder factor must be > 1");
    if (start > stop) throw arf::usage_error("ladder start exceeds stop");
    double v = static_cast<double>(start);
    std::uint64_t n = start;
    while (n <= stop) {
      out.push_back(n);
      v *= factor;
      if (v > 9.0e18) break;
      const std::uint64_t next =
          static_cast<std::uint64_t>(std::llround(v));
      n = next > n ? next : n + 1;
    }
  } else {
    for (const auto& tok : split(spec, ','))
      if (!trim(tok).empty()) out.push_back(parse_count(tok));
  }
  if (out.empty()) throw arf::usage_error("empty ladder");
  return out;
}

struct LadderOpt {
  std::string n;       // single point
  std::string ladder;  // start:stop:xF or comma list
  void attach(CLI::App* sub, const std::string& what) {
    sub->add_option("--n", n, "single " + what);
    sub->add_option("--ladder", ladder,
                    what + " ladder: start:stop:xFACTOR or comma list");
  }
  std::vector<std::uint64_t> points() const {
    if (!n.empty() && !ladder.empty())
      throw arf::usage_error("give --n or --ladder, not both");
    if (!n.empty()) return {parse_count(n)};
    if (!ladder.empty()) return parse_ladder(ladder);
    throw arf::usage_error("need --n or --ladder");
  }
};

// "rot(alpha[,k])" with alpha = number or "golden"; "poly(c0,c1,...)".
arf::ToySystem parse_system(const std::string& spec) {
  const std::string s = trim(spec);
  const std::size_t open = s.find('(');
  const std::size_t close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos ||
      close < open || close + 1 != s.size())
    throw arf::usage_error("system must be rot(alpha[,k]) or "
                           "poly(c0,c1,...): '" + spec + "'");
  const std::string head = trim(s.substr(0, open));
  std::vector<std::string> args;
  const std::string inner = s.substr(open + 1, close - open - 1);
  if (!trim(inner).empty()) args = split(inner, ',');
  arf::ToySystem sys;
  if (head == "rot" || head == "rotation") {
    if (args.empty() || args.size() > 2)
      throw arf::usage_error("rot takes rot(alpha) or rot(alpha,k)");
    arf::RotationSystem r;
    r.alpha = parse_real(args[0]);
    if (args.size() == 2) r.character = parse_integer(args[1]);
    sys.dynamics = r;
  } else if (head == "poly" || head == "polyphase") {
    if (args.empty())
      throw arf::usage_error("poly needs at least one coefficient");
    arf::PolyphaseSystem p;
    for (const auto& a : args) p.coefficients.push_back(parse_real(a));
    sys.dynamics = p;
  } else {
    throw arf::usage_error("unknown system family '" + head +
                           "' (rot or poly)");
  }
  return sys;
}

// Semicolon-separated list; a single system replicates to the expected
// count (2^k - 1 for order k).
std::vector<arf::ToySystem> parse_systems(const std::string& spec,
                                          std::size_t expected, double x0) {
  std::vector<arf::ToySystem> out;
  for (const auto& tok : split(spec, ';'))
    if (!trim(tok).empty()) out.push_back(parse_system(tok));
  if (out.empty()) throw arf::usage_error("no systems given");
  if (out.size() == 1 && expected > 1) out.assign(expected, out[0]);
  if (out.size() != expected)
    throw arf::usage_error("order k needs 2^k - 1 systems (or a single one "
                           "to replicate); got " + std::to_string(out.size()) +
                           ", expected " + std::to_string(expected));
  for (auto& s : out) s.x0 = x0;
  return out;
}

json system_json(const arf::ToySystem& s) {
  json j;
  if (const auto* r = std::get_if<arf::RotationSystem>(&s.dynamics)) {
    j["type"] = "rotation";
    j["alpha"] = r->alpha;
    j["character"] = r->character;
  } else {
    const auto& p = std::get<arf::PolyphaseSystem>(s.dynamics);
    j["type"] = "polyphase";
    j["coefficients"] = p.coefficients;
  }
  j["x0"] = s.x0;
  return j;
}

json complex_json(std::complex<double> z) {
  return json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}};
}

json base_config(const std::string& sub, const Common& c) {
  json j;
  j["subcommand"] = sub;
  j["budget"] = c.budget;
  j["segment"] = c.segment;
  return j;
}

using Row = std::vector<std::string>;
std::string u64s(std::uint64_t v) { return std::to_string(v); }
std::string ds(double v) { return arf::fmt_double(v); }

// ------------------------------------------------------------ subcommands

void setup_sieve(CLI::App& app) {
  struct O {
    Common c;
    std::string kind = "mobius", limit;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "sieve", "sieve a function table into the cache and summarize it");
  add_common(sub, o->c, false, true);
  sub->add_option("--kind", o->kind,
                  "mobius|liouville|mangoldt|omega|squarefree|unit")
      ->required();
  sub->add_option("--limit", o->limit, "largest index to cover")->required();
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const std::uint64_t limit = parse_count(o->limit);
    const auto table = fetch(o->c, o->kind, limit);
    json cfg = base_config("sieve", o->c);
    cfg["kind"] = o->kind;
    cfg["limit"] = limit;
    json res;
    res["kind"] = arf::kind_name(table.kind);
    res["limit"] = limit;
    res["sum"] = table.values.sum();
    res["nonzero"] =
        static_cast<std::uint64_t>((table.values != 0.0).count());
    write_out(o->c, [&](std::ostream& os) { arf::write_json_doc(os, cfg, res); });
  });
}

void setup_expsum(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "mobius";
    LadderOpt lad;
    double t = 0;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "expsum", "|(1/N) sum v(n) e(nt)| along a ladder (value = |S|/N)");
  add_common(sub, o->c, true, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  o->lad.attach(sub, "N");
  sub->add_option("--t", o->t, "phase t in e(nt)")->required();
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const auto pts = o->lad.points();
    const std::uint64_t top = *std::max_element(pts.begin(), pts.end());
    const auto table = fetch(o->c, o->weight, top);
    json cfg = base_config("expsum", o->c);
    cfg["weight"] = o->weight;
    cfg["ladder"] = pts;
    cfg["t"] = o->t;
    std::vector<Row> rows;
    std::vector<std::string> info;
    std::vector<std::pair<double, double>> fp;
    for (auto n : pts) {
      const auto s = arf::exp_sum(table, n, o->t);
      const double v = std::abs(s) / static_cast<double>(n);
      rows.push_back({u64s(n), ds(v)});
      info.push_back("info " + json{{"n", n},
                                    {"re", s.real()},
                                    {"im", s.imag()}}.dump());
      fp.emplace_back(static_cast<double>(n), v);
    }
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"n", "value"}, rows, info);
    });
    if (pts.size() > 1) fit_sidecar(o->c, cfg, fp);
    maybe_plot(o->c, "expsum " + o->weight, true, true);
  });
}

void setup_supnorm(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "mobius";
    LadderOpt lad;
    std::uint64_t mult = 8;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "supnorm", "grid supremum of |(1/N) sum v(n) e(nt)| over t");
  add_common(sub, o->c, true, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  o->lad.attach(sub, "N");
  sub->add_option("--grid-mult", o->mult,
                  "grid size = next power of two above mult*N (>= 8)");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const auto pts = o->lad.points();
    const std::uint64_t top = *std::max_element(pts.begin(), pts.end());
    const auto table = fetch(o->c, o->weight, top);
    json cfg = base_config("supnorm", o->c);
    cfg["weight"] = o->weight;
    cfg["ladder"] = pts;
    cfg["grid_mult"] = o->mult;
    std::vector<Row> rows;
    std::vector<std::string> info;
    std::vector<std::pair<double, double>> fp;
    for (auto n : pts) {
      const std::uint64_t grid = arf::next_pow2(o->mult * n);
      const auto gs = arf::sup_exp_sum(table, n, grid);
      rows.push_back({u64s(n), ds(gs.sup_value)});
      info.push_back("info " + json{{"n", n},
                                    {"grid", gs.grid_size},
                                    {"argmax_t", gs.argmax_t},
                                    {"error_factor", gs.error_factor}}.dump());
      fp.emplace_back(static_cast<double>(n), gs.sup_value);
    }
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"n", "value"}, rows, info);
    });
    if (pts.size() > 1) fit_sidecar(o->c, cfg, fp);
    maybe_plot(o->c, "supnorm " + o->weight, true, true);
  });
}

void setup_corr(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "mobius", n, maxlag;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "corr", "autocorrelation profile c_{l,N} for lags 0..L");
  add_common(sub, o->c, true, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  sub->add_option("--n", o->n, "number of terms N")->required();
  sub->add_option("--maxlag", o->maxlag, "largest lag L (default N)");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const std::uint64_t n = parse_count(o->n);
    const std::uint64_t maxlag =
        o->maxlag.empty() ? n : parse_count(o->maxlag);
    const auto table = fetch(o->c, o->weight, n + maxlag);
    const auto prof = arf::autocorrelation(table, n, maxlag);
    json cfg = base_config("corr", o->c);
    cfg["weight"] = o->weight;
    cfg["n"] = n;
    cfg["maxlag"] = maxlag;
    std::vector<Row> rows;
    for (std::uint64_t l = 0; l <= maxlag; ++l)
      rows.push_back({u64s(l), ds(prof.values[static_cast<long>(l)])});
    const std::string meta =
        "meta " + json{{"fft_used", prof.fft_used},
                       {"integer_exact", prof.integer_exact},
                       {"max_residual", prof.max_residual},
                       {"precision_warning", prof.precision_warning}}.dump();
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"lag", "value"}, rows, {meta});
    });
    maybe_plot(o->c, "corr " + o->weight, false, false);
  });
}

void setup_cesaro(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "liouville";
    LadderOpt lad;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "cesaro", "Cesaro mean (1/N) sum_{n<=N} |c_{n,N}| along a ladder");
  add_common(sub, o->c, true, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  o->lad.attach(sub, "N");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const auto pts = o->lad.points();
    const std::uint64_t top = *std::max_element(pts.begin(), pts.end());
    const auto table = fetch(o->c, o->weight, 2 * top);
    json cfg = base_config("cesaro", o->c);
    cfg["weight"] = o->weight;
    cfg["ladder"] = pts;
    std::vector<Row> rows;
    std::vector<std::pair<double, double>> fp;
    for (auto n : pts) {
      const double v = arf::cesaro_abs(arf::autocorrelation(table, n, n));
      rows.push_back({u64s(n), ds(v)});
      fp.emplace_back(static_cast<double>(n), v);
    }
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"n", "value"}, rows);
    });
    if (pts.size() > 1) fit_sidecar(o->c, cfg, fp);
    maybe_plot(o->c, "cesaro " + o->weight, true, true);
  });
}

void setup_order3(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "liouville";
    LadderOpt lad;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "order3", "order-3 correlation mean along a ladder");
  add_common(sub, o->c, true, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  o->lad.attach(sub, "N");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const auto pts = o->lad.points();
    const std::uint64_t top = *std::max_element(pts.begin(), pts.end());
    const auto table = fetch(o->c, o->weight, 3 * top);
    json cfg = base_config("order3", o->c);
    cfg["weight"] = o->weight;
    cfg["ladder"] = pts;
    std::vector<Row> rows;
    std::vector<std::pair<double, double>> fp;
    for (auto n : pts) {
      const double v = arf::order3_quantity(table, n);
      rows.push_back({u64s(n), ds(v)});
      fp.emplace_back(static_cast<double>(n), v);
    }
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"n", "value"}, rows);
    });
    if (pts.size() > 1) fit_sidecar(o->c, cfg, fp);
    maybe_plot(o->c, "order3 " + o->weight, true, true);
  });
}

void setup_geom(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "liouville";
    double rho = 1.5;
    unsigned levels = 0;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "geom", "geometric summability partial sums at N = floor(rho^m)");
  add_common(sub, o->c, false, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  sub->add_option("--rho", o->rho, "geometric ratio > 1")->required();
  sub->add_option("--levels", o->levels, "number of levels m = 1..levels")
      ->required();
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    if (!(o->rho > 1)) throw arf::usage_error("rho must be > 1");
    if (o->levels == 0) throw arf::usage_error("levels must be >= 1");
    const double topd = std::pow(o->rho, static_cast<double>(o->levels));
    if (!(topd < 9.0e18)) throw arf::resource_error("rho^levels overflows");
    const std::uint64_t top = static_cast<std::uint64_t>(topd);
    const auto table = fetch(o->c, o->weight, 2 * std::max<std::uint64_t>(top, 1));
    const auto series = arf::geometric_summability(table, o->rho, o->levels);
    json cfg = base_config("geom", o->c);
    cfg["weight"] = o->weight;
    cfg["rho"] = o->rho;
    cfg["levels"] = o->levels;
    json res;
    res["rho"] = series.rho;
    res["levels"] = json::array();
    for (const auto& lv : series.levels)
      res["levels"].push_back(json{{"m", lv.level},
                                   {"n", lv.n_terms},
                                   {"mean_abs", lv.mean_abs},
                                   {"partial_sum", lv.partial_sum},
                                   {"witness_lag", lv.witness_lag},
                                   {"witness_value", lv.witness_value}});
    write_out(o->c, [&](std::ostream& os) { arf::write_json_doc(os, cfg, res); });
  });
}

void setup_mrt(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "liouville", x, windows;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "mrt", "short-window mean (1/(H X)) sum_{h<=H} |sum_{n<=X} v(n)v(n+h)|");
  add_common(sub, o->c, true, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  sub->add_option("--x", o->x, "number of terms X")->required();
  sub->add_option("--window", o->windows,
                  "window length(s) H, comma list (default H = X)");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const std::uint64_t x = parse_count(o->x);
    std::vector<std::uint64_t> hs;
    if (o->windows.empty())
      hs.push_back(x);
    else
      for (const auto& tok : split(o->windows, ','))
        if (!trim(tok).empty()) hs.push_back(parse_count(tok));
    if (hs.empty()) throw arf::usage_error("empty --window list");
    const std::uint64_t hmax = *std::max_element(hs.begin(), hs.end());
    const auto table = fetch(o->c, o->weight, x + hmax);
    json cfg = base_config("mrt", o->c);
    cfg["weight"] = o->weight;
    cfg["x"] = x;
    cfg["windows"] = hs;
    std::vector<Row> rows;
    for (auto h : hs)
      rows.push_back({u64s(h), ds(arf::mrt_window_sum(table, x, h))});
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"h", "value"}, rows);
    });
    maybe_plot(o->c, "mrt " + o->weight, true, true);
  });
}

void setup_cube(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "liouville";
    LadderOpt lad;
    unsigned k = 2;
    bool include_base = false;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "cube", "cube sum (1/N^k) sum over [1,N]^k of the corner product");
  add_common(sub, o->c, true, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  o->lad.attach(sub, "N");
  sub->add_option("--k", o->k, "cube dimension (1..5; 4,5 need N <= 64)");
  sub->add_flag("--include-base", o->include_base,
                "full-cube average with base point (box average of v|[1,N])");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const auto pts = o->lad.points();
    const std::uint64_t top = *std::max_element(pts.begin(), pts.end());
    const std::uint64_t limit =
        o->include_base ? top : top * std::max<std::uint64_t>(o->k, 1);
    const auto table = fetch(o->c, o->weight, limit);
    json cfg = base_config("cube", o->c);
    cfg["weight"] = o->weight;
    cfg["ladder"] = pts;
    cfg["k"] = o->k;
    cfg["include_base"] = o->include_base;
    arf::CubeSpec spec;
    spec.dimension = o->k;
    spec.include_base = o->include_base;
    std::vector<Row> rows;
    std::vector<std::pair<double, double>> fp;
    for (auto n : pts) {
      const double v = arf::cube_sum(table, n, spec);
      rows.push_back({u64s(n), ds(v)});
      fp.emplace_back(static_cast<double>(n), std::fabs(v));
    }
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"n", "value"}, rows);
    });
    if (pts.size() > 1) fit_sidecar(o->c, cfg, fp);
    maybe_plot(o->c, "cube " + o->weight, true, false);
  });
}

void setup_gowers(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "mobius";
    LadderOpt lad;
    unsigned degree = 2;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "gowers", "Gowers box norm of the weight restricted to [1,N]");
  add_common(sub, o->c, true, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  o->lad.attach(sub, "N");
  sub->add_option("--degree", o->degree,
                  "box-norm degree, 2 or 3 (3 capped at N <= 65536)");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const auto pts = o->lad.points();
    const std::uint64_t top = *std::max_element(pts.begin(), pts.end());
    const auto table = fetch(o->c, o->weight, top);
    json cfg = base_config("gowers", o->c);
    cfg["weight"] = o->weight;
    cfg["ladder"] = pts;
    cfg["degree"] = o->degree;
    std::vector<Row> rows;
    std::vector<std::pair<double, double>> fp;
    for (auto n : pts) {
      const double v = arf::gowers_box_norm(
          table.values.head(static_cast<long>(n)), o->degree);
      rows.push_back({u64s(n), ds(v)});
      fp.emplace_back(static_cast<double>(n), v);
    }
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"n", "value"}, rows);
    });
    if (pts.size() > 1) fit_sidecar(o->c, cfg, fp);
    maybe_plot(o->c, "gowers " + o->weight, true, true);
  });
}

void setup_localfactor(CLI::App& app) {
  struct O {
    Common c;
    std::uint64_t p = 0;
    unsigned d = 0;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "localfactor", "von Mangoldt cube local factor beta_p(d)");
  add_common(sub, o->c, false, false);
  sub->add_option("--p", o->p, "prime p <= 1000")->required();
  sub->add_option("--d", o->d, "cube dimension 1..4")->required();
  sub->callback([o] {
    const auto lf = arf::local_factor(o->p, o->d);
    // The bare value always goes to stdout (scriptable); --out adds the
    // full JSON record.
    std::cout << ds(lf.value) << "\n";
    if (!o->c.out.empty()) {
      json cfg = base_config("localfactor", o->c);
      cfg.erase("budget");
      cfg.erase("segment");
      cfg["p"] = o->p;
      cfg["d"] = o->d;
      json res{{"p", lf.p},
               {"d", lf.dimension},
               {"count", lf.count},
               {"value", lf.value},
               {"exact", lf.exact}};
      write_out(o->c, [&](std::ostream& os) { arf::write_json_doc(os, cfg, res); });
    }
  });
}

void setup_mangoldt_box(CLI::App& app) {
  struct O {
    Common c;
    std::string n;
    unsigned d = 2;
    std::string cutoff = "1000";
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "mangoldt-box", "Mangoldt cube sum and the truncated local product");
  add_common(sub, o->c, false, true);
  sub->add_option("--n", o->n, "number of terms N")->required();
  sub->add_option("--d", o->d, "cube dimension, 1 or 2");
  sub->add_option("--cutoff", o->cutoff, "local product over primes <= cutoff");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const std::uint64_t n = parse_count(o->n);
    const std::uint64_t cutoff = parse_count(o->cutoff);
    const auto table =
        fetch(o->c, "mangoldt", n * std::max<std::uint64_t>(o->d, 1));
    const double box = arf::mangoldt_box_sum(table, n, o->d);
    const double lp = arf::local_product(o->d, cutoff);
    json cfg = base_config("mangoldt-box", o->c);
    cfg["n"] = n;
    cfg["d"] = o->d;
    cfg["cutoff"] = cutoff;
    json res{{"N", n},
             {"d", o->d},
             {"box_sum", box},
             {"local_product", lp},
             {"cutoff", cutoff}};
    write_out(o->c, [&](std::ostream& os) { arf::write_json_doc(os, cfg, res); });
  });
}

void setup_wtrick(CLI::App& app) {
  struct O {
    Common c;
    std::string n, w, b = "1";
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "wtrick", "W-tricked Mangoldt table (phi(W)/W) Lambda'(Wn + b)");
  add_common(sub, o->c, true, true);
  sub->add_option("--n", o->n, "table length N")->required();
  sub->add_option("--w", o->w, "W = product of primes <= w")->required();
  sub->add_option("--b", o->b, "residue b, coprime to W (default 1)");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const std::uint64_t n = parse_count(o->n);
    const std::uint64_t w = parse_count(o->w);
    const std::uint64_t b = parse_count(o->b);
    const auto table = arf::w_trick_table(n, w, b, sieve_opts(o->c));
    json cfg = base_config("wtrick", o->c);
    cfg["n"] = n;
    cfg["w"] = w;
    cfg["b"] = b;
    std::vector<Row> rows;
    for (std::uint64_t i = 1; i <= n; ++i)
      rows.push_back({u64s(i), ds(table.at(i))});
    const double mean = table.values.sum() / static_cast<double>(n);
    const std::string info = "info " + json{{"mean", mean}}.dump();
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"n", "value"}, rows, {info});
    });
    maybe_plot(o->c, "wtrick", false, false);
  });
}

void setup_primeavg(CLI::App& app) {
  struct O {
    Common c;
    LadderOpt lad;
    std::string phase;  // empty = a ≡ 1
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "primeavg", "|prime average - Lambda'-weighted average| of a_n = e(n phi)");
  add_common(sub, o->c, true, true);
  o->lad.attach(sub, "N");
  sub->add_option("--phase", o->phase,
                  "phase phi (number or 'golden'); omitted = a == 1");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const auto pts = o->lad.points();
    json cfg = base_config("primeavg", o->c);
    cfg["ladder"] = pts;
    std::function<std::complex<double>(std::uint64_t)> a;
    if (o->phase.empty()) {
      cfg["phase"] = nullptr;
      a = [](std::uint64_t) { return std::complex<double>(1.0, 0.0); };
    } else {
      const double phi = parse_real(o->phase);
      cfg["phase"] = phi;
      a = [phi](std::uint64_t n) { return arf::e_frac(arf::frac_mul(phi, n)); };
    }
    std::vector<Row> rows;
    std::vector<std::pair<double, double>> fp;
    for (auto n : pts) {
      const double v = arf::prime_average_gap(a, n, sieve_opts(o->c));
      rows.push_back({u64s(n), ds(v)});
      fp.emplace_back(static_cast<double>(n), v);
    }
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"n", "value"}, rows);
    });
    if (pts.size() > 1) fit_sidecar(o->c, cfg, fp);
    maybe_plot(o->c, "primeavg", true, true);
  });
}

void setup_cubicavg(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "mobius";
    LadderOpt lad;
    unsigned k = 2;
    std::string systems = "rot(golden,1)";
    double x0 = 0;
    unsigned points = 8;
    std::uint64_t seed = 1;
    bool centered = false;
    std::string cutoff = "1000";
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "cubicavg", "weighted cubic ergodic average on toy systems");
  add_common(sub, o->c, false, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  o->lad.attach(sub, "N");
  sub->add_option("--k", o->k, "average order, 2 or 3");
  sub->add_option("--systems", o->systems,
                  "semicolon list of rot(alpha[,k])/poly(c0,c1,...); a single "
                  "system replicates to all 2^k - 1 slots");
  sub->add_option("--x0", o->x0, "initial point for every system");
  sub->add_option("--points", o->points,
                  "random initial points sampled per N (0 = use --x0 only)");
  sub->add_option("--seed", o->seed, "RNG seed for --points sampling");
  sub->add_flag("--centered", o->centered,
                "Mangoldt centered average (needs --weight mangoldt and "
                "polyphase systems)");
  sub->add_option("--cutoff", o->cutoff,
                  "local product cutoff for --centered (default 1000)");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const auto pts = o->lad.points();
    const std::uint64_t top = *std::max_element(pts.begin(), pts.end());
    const std::size_t slots = (std::size_t{1} << o->k) - 1;
    const auto systems = parse_systems(o->systems, slots, o->x0);
    const auto table =
        fetch(o->c, o->weight, top * std::max<unsigned>(o->k, 1));
    json cfg = base_config("cubicavg", o->c);
    cfg["weight"] = o->weight;
    cfg["ladder"] = pts;
    cfg["k"] = o->k;
    cfg["systems"] = json::array();
    for (const auto& s : systems) cfg["systems"].push_back(system_json(s));
    cfg["centered"] = o->centered;
    json res = json::array();
    if (o->centered) {
      const std::uint64_t cutoff = parse_count(o->cutoff);
      cfg["cutoff"] = cutoff;
      if (arf::kind_from_name(o->weight) != arf::FunctionKind::mangoldt)
        throw arf::usage_error("--centered needs --weight mangoldt");
      for (auto n : pts) {
        const auto m =
            arf::mangoldt_cubic_average(o->k, table, systems, n, cutoff);
        res.push_back(json{{"n", n},
                           {"raw", complex_json(m.raw.value)},
                           {"centered", complex_json(m.centered.value)},
                           {"local_factor_product", m.local_factor_product},
                           {"unit_average", complex_json(m.unit_average)}});
      }
    } else if (o->points == 0) {
      for (auto n : pts) {
        const auto r = arf::cubic_weighted_average(o->k, table, systems, n);
        res.push_back(json{{"n", n},
                           {"value", complex_json(r.value)},
                           {"integer_exact", r.integer_exact}});
      }
    } else {
      cfg["points"] = o->points;
      cfg["seed"] = o->seed;
      for (auto n : pts) {
        const auto s = arf::sampled_cubic_average(o->k, table, systems, n,
                                                  o->points, o->seed);
        json samples = json::array();
        for (const auto& z : s.samples) samples.push_back(complex_json(z));
        res.push_back(json{{"n", n},
                           {"max", complex_json(s.max_result.value)},
                           {"samples", samples}});
      }
    }
    write_out(o->c, [&](std::ostream& os) { arf::write_json_doc(os, cfg, res); });
  });
}

void setup_kbsz(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "mobius";
    std::string system = "rot(golden,1)";
    double x0 = 0;
    std::string p, q, n;
    double epsilon = 0;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "kbsz", "two-prime orthogonality probe (hypothesis vs conclusion)");
  add_common(sub, o->c, false, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  sub->add_option("--system", o->system, "rot(alpha[,k]) or poly(c0,...)");
  sub->add_option("--x0", o->x0, "initial point");
  sub->add_option("--p", o->p, "first prime")->required();
  sub->add_option("--q", o->q, "second prime")->required();
  sub->add_option("--n", o->n, "number of terms N")->required();
  sub->add_option("--epsilon", o->epsilon, "epsilon in (0,1)")->required();
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const std::uint64_t p = parse_count(o->p);
    const std::uint64_t q = parse_count(o->q);
    const std::uint64_t n = parse_count(o->n);
    auto system = parse_system(o->system);
    system.x0 = o->x0;
    const auto table = fetch(o->c, o->weight, n);
    const auto probe = arf::kbsz_probe(table, system, p, q, n, o->epsilon);
    json cfg = base_config("kbsz", o->c);
    cfg["weight"] = o->weight;
    cfg["system"] = system_json(system);
    cfg["p"] = p;
    cfg["q"] = q;
    cfg["n"] = n;
    cfg["epsilon"] = o->epsilon;
    json res{{"lhs", probe.lhs},
             {"rhs_bound", probe.rhs_bound},
             {"weighted_avg", probe.weighted_avg},
             {"hypothesis_met", probe.hypothesis_met},
             {"conclusion_met", probe.conclusion_met}};
    write_out(o->c, [&](std::ostream& os) { arf::write_json_doc(os, cfg, res); });
  });
}

void setup_wws(CLI::App& app) {
  struct O {
    Common c;
    std::string weight = "mobius";
    std::string system = "rot(golden,1)";
    double x0 = 0;
    LadderOpt lad;
    std::uint64_t mult = 8;
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "wws", "Wiener-Wintner twisted supremum sup_t |(1/N) sum v(n) f(T^n x) e(nt)|");
  add_common(sub, o->c, true, true);
  sub->add_option("--weight", o->weight, "weight function kind");
  sub->add_option("--system", o->system, "rot(alpha[,k]) or poly(c0,...)");
  sub->add_option("--x0", o->x0, "initial point");
  o->lad.attach(sub, "N");
  sub->add_option("--grid-mult", o->mult,
                  "grid size = next power of two above mult*N (>= 8)");
  sub->callback([o] {
    arf::set_max_threads(o->c.threads);
    const auto pts = o->lad.points();
    const std::uint64_t top = *std::max_element(pts.begin(), pts.end());
    auto system = parse_system(o->system);
    system.x0 = o->x0;
    const auto table = fetch(o->c, o->weight, top);
    json cfg = base_config("wws", o->c);
    cfg["weight"] = o->weight;
    cfg["system"] = system_json(system);
    cfg["ladder"] = pts;
    cfg["grid_mult"] = o->mult;
    std::vector<Row> rows;
    std::vector<std::string> info;
    std::vector<std::pair<double, double>> fp;
    for (auto n : pts) {
      const std::uint64_t grid = arf::next_pow2(o->mult * n);
      const auto gs = arf::wiener_wintner_probe(table, system, n, grid);
      rows.push_back({u64s(n), ds(gs.sup_value)});
      info.push_back("info " + json{{"n", n},
                                    {"grid", gs.grid_size},
                                    {"argmax_t", gs.argmax_t},
                                    {"error_factor", gs.error_factor}}.dump());
      fp.emplace_back(static_cast<double>(n), gs.sup_value);
    }
    write_out(o->c, [&](std::ostream& os) {
      arf::write_csv(os, cfg, {"n", "value"}, rows, info);
    });
    if (pts.size() > 1) fit_sidecar(o->c, cfg, fp);
    maybe_plot(o->c, "wws " + o->weight, true, true);
  });
}

void setup_fit(CLI::App& app) {
  struct O {
    Common c;
    std::string points_file;
    std::string model = "auto";
  };
  auto o = std::make_shared<O>();
  auto* sub = app.add_subcommand(
      "fit", "fit C/log^kappa(N) and C N^-theta to a two-column points file");
  add_common(sub, o->c, false, false);
  sub->add_option("--points", o->points_file,
                  "CSV/whitespace file of N,value rows ('#' comments and a "
                  "header row are skipped)")
      ->required();
  sub->add_option("--model", o->model, "auto | log-power | power")
      ->check(CLI::IsMember({"auto", "log-power", "power"}));
  sub->callback([o] {
    std::ifstream f(o->points_file);
    if (!f)
      throw arf::usage_error("cannot open points file: " + o->points_file);
    std::vector<std::pair<double, double>> points;
    std::string line;
    while (std::getline(f, line)) {
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      auto cells = split(t, ',');
      if (cells.size() < 2) {  // fall back to whitespace separation
        cells.clear();
        std::string cur;
        for (char ch : t) {
          if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) cells.push_back(cur);
            cur.clear();
          } else {
            cur.push_back(ch);
          }
        }
        if (!cur.empty()) cells.push_back(cur);
      }
      if (cells.size() < 2)
        throw arf::usage_error("bad points row: '" + line + "'");
      try {
        points.emplace_back(parse_real(cells[0]), parse_real(cells[1]));
      } catch (const arf::usage_error&) {
        if (points.empty()) continue;  // header row
        throw;
      }
    }
    if (points.size() < 4)
      throw arf::usage_error("need at least 4 points to fit, got " +
                             std::to_string(points.size()));
    for (const auto& [n, y] : points)
      if (!(y > 0))
        throw arf::usage_error("fit needs positive values (got " +
                               arf::fmt_double(y) + ")");
    arf::DecayFit fit;
    if (o->model == "log-power")
      fit = arf::fit_log_power(points);
    else if (o->model == "power")
      fit = arf::fit_power(points);
    else
      fit = arf::fit_best(points);
    json cfg;
    cfg["subcommand"] = "fit";
    cfg["points_file"] = o->points_file;
    cfg["model"] = o->model;
    write_out(o->c, [&](std::ostream& os) {
      arf::write_json_doc(os, cfg, arf::fit_to_json(fit));
    });
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arf " + std::string(arf::version) +
               " — correlation and ergodic-average experiments with "
               "multiplicative weights"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  setup_sieve(app);
  setup_expsum(app);
  setup_supnorm(app);
  setup_corr(app);
  setup_cesaro(app);
  setup_order3(app);
  setup_geom(app);
  setup_mrt(app);
  setup_cube(app);
  setup_gowers(app);
  setup_localfactor(app);
  setup_mangoldt_box(app);
  setup_wtrick(app);
  setup_primeavg(app);
  setup_cubicavg(app);
  setup_kbsz(app);
  setup_wws(app);
  setup_fit(app);

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const arf::usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const arf::resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const arf::format_error& e) {
    std::cerr << "cache format error: " << e.what() << "\n";
    return 3;
  } catch (const arf::corruption_error& e) {
    std::cerr << "cache corruption: " << e.what() << "\n";
    return 3;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource error: out of memory\n";
    return 3;
  } catch (const arf::internal_error& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
