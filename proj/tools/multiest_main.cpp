#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multiest/akns.hpp"
#include "multiest/calibration.hpp"
#include "multiest/operators.hpp"
#include "multiest/report.hpp"
#include "multiest/selfcheck.hpp"
#include "multiest/size_energy.hpp"
#include "multiest/symbols.hpp"
#include "multiest/tiles.hpp"
#include "multiest/trees.hpp"

namespace {

using multiest::config_error;
using multiest::format_double;
using nlohmann::json;

// Binds CLI options to a JSON-configurable key set: --config values fill in
// options the command line left at their defaults, unknown keys are rejected,
// and the effective configuration is serialized for the manifest.
class ConfigBinder {
 public:
  explicit ConfigBinder(std::string subcommand) : sub_(std::move(subcommand)) {}

  template <typename T>
  void bind(CLI::Option* opt, const std::string& key, T* target) {
    opts_[key] = opt;
    setters_[key] = [target](const json& v) { *target = v.get<T>(); };
    getters_[key] = [target](json& out, const std::string& k) { out[k] = *target; };
  }

  void bind_string_list(CLI::Option* opt, const std::string& key, std::vector<std::string>* target) {
    opts_[key] = opt;
    setters_[key] = [target](const json& v) { *target = v.get<std::vector<std::string>>(); };
    getters_[key] = [target](json& out, const std::string& k) { out[k] = *target; };
  }

  void apply_file(const std::string& path) {
    if (path.empty()) return;
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file: " + path);
    json j;
    try {
      is >> j;
    } catch (const std::exception& e) {
      throw config_error(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      auto it = setters_.find(key);
      if (it == setters_.end()) throw config_error("unknown config key: " + key);
      if (opts_.at(key)->count() > 0) continue;  // explicit flags win
      try {
        it->second(value);
      } catch (const std::exception& e) {
        throw config_error("config key '" + key + "': " + e.what());
      }
    }
  }

  json effective() const {
    json out;
    out["subcommand"] = sub_;
    for (const auto& [key, get] : getters_) get(out, key);
    return out;
  }

 private:
  std::string sub_;
  std::map<std::string, CLI::Option*> opts_;
  std::map<std::string, std::function<void(const json&)>> setters_;
  std::map<std::string, std::function<void(json&, const std::string&)>> getters_;
};

struct OutputSink {
  std::string dir;
  json config;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const std::string& name, const std::string& content) const {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    multiest::write_text_file((std::filesystem::path(dir) / name).string(), content);
  }
  void finish() const {
    if (dir.empty()) return;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    multiest::write_text_file(
        (std::filesystem::path(dir) / "manifest.json").string(),
        multiest::make_manifest(config, multiest::constants().version, wall).dump(2) + "\n");
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

multiest::Preset parse_preset(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string& kind = parts.front();
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
      throw config_error("preset '" + text + "': wrong number of fields");
    }
  };
  try {
    if (kind == "mode") {
      want(1, 1);
      return multiest::Preset::pure_mode(std::stol(parts[1]));
    }
    if (kind == "chirp") {
      want(1, 2);
      const int sign = std::stoi(parts[1]);
      return multiest::Preset::chirp(sign, parts.size() > 2 ? std::stod(parts[2]) : 1.0);
    }
    if (kind == "gauss") {
      want(2, 3);
      return multiest::Preset::gaussian(std::stod(parts[1]), std::stod(parts[2]),
                                        parts.size() > 3 ? std::stol(parts[3]) : 0);
    }
    if (kind == "ind") {
      want(2, 2);
      return multiest::Preset::indicator(std::stod(parts[1]), std::stod(parts[2]));
    }
    if (kind == "rand") {
      want(2, 2);
      return multiest::Preset::random_bandlimited(std::stol(parts[1]),
                                                  std::stoull(parts[2]));
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("preset '" + text + "': malformed numeric field");
  }
  throw config_error("unknown preset kind: " + kind +
                     " (expected mode|chirp|gauss|ind|rand)");
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  LineFit f;
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double vx = n * sxx - sx * sx;
  const double vy = n * syy - sy * sy;
  if (vx <= 0.0) return f;
  f.slope = (n * sxy - sx * sy) / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy > 0.0 ? (n * sxy - sx * sy) * (n * sxy - sx * sy) / (vx * vy) : 1.0;
  return f;
}

int run_trees(int n, const multiest::RegionParams& rp, std::size_t samples, std::uint64_t seed,
              OutputSink& sink) {
  const auto trees = multiest::enumerate_trees(n);
  const auto report = multiest::coverage_report(n, rp, samples, seed);
  std::cout << "n=" << n << " trees=" << trees.size() << " uncovered_fraction="
            << format_double(report.uncovered_fraction) << " mean_multiplicity="
            << format_double(report.mean_multiplicity) << "\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    rows.push_back({std::to_string(i), trees[i].to_paren(), std::to_string(trees[i].height()),
                    std::to_string(report.per_tree_hits.at(i))});
    std::cout << "  " << trees[i].to_paren() << "\n";
  }
  sink.write("trees.csv", multiest::csv_table({"index", "paren", "height", "hits"}, rows));
  return 0;
}

int run_partition(int n, const multiest::RegionParams& rp, int trunc, std::size_t samples,
                  std::uint64_t seed, double gap_range, bool check, OutputSink& sink) {
  auto tele = multiest::telescope(n, rp, trunc);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-gap_range, gap_range);
  double worst_sum = 0.0, worst_identity = 0.0;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t t = 0; t < samples; ++t) {
    std::vector<double> xi(static_cast<std::size_t>(n));
    xi[0] = U(rng);
    for (int j = 1; j < n; ++j) {
      xi[static_cast<std::size_t>(j)] =
          xi[static_cast<std::size_t>(j - 1)] + std::exp2(U(rng));
    }
    const double total = tele.sum_summands(xi) + tele.residual(xi);
    const double direct = tele.chi.eval(xi);
    worst_identity = std::max(worst_identity, std::abs(total - direct));
    const double resid = tele.residual(xi);
    worst_sum = std::max(worst_sum, std::abs(resid));
    if (t < 64) {
      rows.push_back({std::to_string(t), format_double(xi[0]), format_double(xi.back()),
                      format_double(tele.sum_summands(xi)), format_double(resid)});
    }
  }
  std::cout << "partition n=" << n << " samples=" << samples
            << " max|residual|=" << format_double(worst_sum)
            << " max|telescope-identity|=" << format_double(worst_identity) << "\n";
  sink.write("partition.csv",
             multiest::csv_table({"sample", "xi_first", "xi_last", "sum_summands", "residual"}, rows));
  if (check && (worst_identity > 1e-12)) return 1;
  return 0;
}

int run_apply(const std::string& op, int n, std::size_t N, double L,
              const std::vector<std::string>& presets, OutputSink& sink) {
  std::vector<multiest::GridFunction> fs;
  for (const auto& p : presets) fs.push_back(multiest::from_preset(parse_preset(p), N, L));
  multiest::GridFunction out(std::vector<multiest::cplx>(8), 1.0);
  if (op == "simplex" || op == "maximal") {
    if (fs.size() != static_cast<std::size_t>(n)) {
      throw config_error("apply: need exactly n presets");
    }
    auto spec = multiest::SimplexOpSpec::simplex(n);
    out = op == "simplex" ? multiest::simplex_apply(spec, fs) : multiest::maximal_apply(spec, fs);
  } else if (op == "alternating") {
    if (fs.size() != static_cast<std::size_t>(n)) {
      throw config_error("apply: need exactly n presets");
    }
    out = multiest::simplex_apply(multiest::SimplexOpSpec::alternating(n), fs);
  } else if (op == "bht") {
    if (fs.size() != 2) throw config_error("apply: bht needs exactly 2 presets");
    out = multiest::bht_kernel(fs[0], fs[1]).out;
  } else if (op == "t3plus" || op == "t3minus") {
    if (fs.size() != 3) throw config_error("apply: t3 needs exactly 3 presets");
    out = multiest::t3_frequency_reference(fs[0], fs[1], fs[2],
                                           op == "t3plus" ? multiest::T3Variant::plus
                                                          : multiest::T3Variant::minus);
  } else {
    throw config_error("unknown op: " + op +
                       " (expected simplex|maximal|alternating|bht|t3plus|t3minus)");
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<double> xs, ys;
  for (std::size_t m = 0; m < out.N(); ++m) {
    rows.push_back({std::to_string(m), format_double(out.x(m)), format_double(out[m].real()),
                    format_double(out[m].imag()), format_double(std::abs(out[m]))});
    xs.push_back(out.x(m));
    ys.push_back(std::abs(out[m]));
  }
  std::cout << "apply op=" << op << " N=" << N << " L=" << format_double(L)
            << " output_l2=" << format_double(multiest::lp_quasinorm(out, 2.0)) << "\n";
  sink.write("apply.csv", multiest::csv_table({"m", "x", "re", "im", "abs"}, rows));
  sink.write("apply.svg",
             multiest::svg_plot({{"|" + op + "|", "#1f77b4", xs, ys}}, "apply " + op, 800, 500));
  return 0;
}

int run_norm_scan(int n, long band, std::size_t trials, std::uint64_t seed, std::size_t nmax,
                  OutputSink& sink) {
  auto spec = multiest::SimplexOpSpec::simplex(n);
  std::vector<std::vector<std::string>> rows;
  std::vector<double> xs, ys;
  for (std::size_t N = 128; N <= nmax; N *= 2) {
    double worst = 0.0, sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      std::vector<multiest::GridFunction> fs;
      for (int j = 0; j < n; ++j) {
        fs.push_back(multiest::from_preset(
            multiest::Preset::random_bandlimited(
                band, seed + 1000 * t + static_cast<std::uint64_t>(j)),
            N, 1.0));
      }
      const double r = multiest::hoelder_ratio(spec, fs, 2.0 / static_cast<double>(n));
      worst = std::max(worst, r);
      sum += r;
    }
    rows.push_back({std::to_string(N), format_double(worst),
                    format_double(sum / static_cast<double>(trials))});
    xs.push_back(std::log2(static_cast<double>(N)));
    ys.push_back(worst);
    std::cout << "N=" << N << " max_ratio=" << format_double(worst)
              << " mean_ratio=" << format_double(sum / static_cast<double>(trials)) << "\n";
  }
  sink.write("norm_scan.csv", multiest::csv_table({"N", "max_ratio", "mean_ratio"}, rows));
  sink.write("norm_scan.svg",
             multiest::svg_plot({{"max ratio", "#d62728", xs, ys}}, "Hoelder ratio vs log2 N", 800, 500));
  return 0;
}

int run_chirp(double rate, int emin, int emax, std::size_t nmax, std::size_t out_samples,
              bool check, OutputSink& sink) {
  if (emin < 1 || emax < emin) throw config_error("chirp: need 1 <= emin <= emax");
  std::vector<std::vector<std::string>> rows;
  std::vector<double> xs, t3s, t3ts;
  for (int e = emin; e <= emax; ++e) {
    const double W = std::exp2(static_cast<double>(e));
    const double L = 2.0 * W;
    const double resolved = 3.0 * rate * W * W / std::numbers::pi;
    std::size_t N = std::max<std::size_t>(out_samples, 1024);
    while (static_cast<double>(N) < resolved && N < nmax) N *= 2;
    const std::size_t M = std::min(out_samples, N);
    auto f1 = multiest::truncate(multiest::from_preset(multiest::Preset::chirp(+1, rate), N, L),
                                 L - W / 2.0, W / 2.0);
    auto f2 = multiest::truncate(multiest::from_preset(multiest::Preset::chirp(-1, rate), N, L),
                                 L - W / 2.0, W / 2.0);
    const double den = multiest::lp_quasinorm(f1, 2.0) * multiest::lp_quasinorm(f2, 2.0) *
                       multiest::lp_quasinorm(f1, 2.0);
    auto tp = multiest::t3_frequency_reference(f1, f2, f1, multiest::T3Variant::plus, M);
    auto tm = multiest::t3_frequency_reference(f1, f2, f1, multiest::T3Variant::minus, M);
    const double r3 = multiest::lp_quasinorm(tp, 2.0 / 3.0) / den;
    const double r3t = multiest::lp_quasinorm(tm, 2.0 / 3.0) / den;
    rows.push_back({format_double(W), format_double(r3), format_double(r3t)});
    xs.push_back(static_cast<double>(e));
    t3s.push_back(r3);
    t3ts.push_back(r3t);
    std::cout << "W=2^" << e << " t3=" << format_double(r3) << " t3tilde=" << format_double(r3t)
              << "\n";
  }
  const auto fit = fit_line(xs, t3ts);
  double pmax = t3s.front(), pmin = t3s.front();
  for (double v : t3s) {
    pmax = std::max(pmax, v);
    pmin = std::min(pmin, v);
  }
  std::cout << "t3tilde fit slope=" << format_double(fit.slope) << " R2=" << format_double(fit.r2)
            << " t3 max/min=" << format_double(pmax / pmin) << "\n";
  sink.write("chirp.csv", multiest::csv_table(
                              {"window", "quasinorm_ratio_t3", "quasinorm_ratio_t3tilde"}, rows));
  std::vector<double> fy;
  for (double x : xs) fy.push_back(fit.intercept + fit.slope * x);
  sink.write("chirp.svg",
             multiest::svg_plot({{"t3tilde", "#d62728", xs, t3ts},
                                 {"t3", "#1f77b4", xs, t3s},
                                 {"fit", "#2ca02c", xs, fy}},
                                "quasinorm ratios vs log2 W", 800, 500));
  if (check && !(fit.r2 >= 0.95 && fit.slope > 0.0 && pmax / pmin <= 2.0)) return 1;
  return 0;
}

int run_tiles(int d, int levels, int per_level, int K, int base_scale, bool check,
              OutputSink& sink) {
  multiest::LacunaryParams p;
  p.d = d;
  p.levels = levels;
  p.per_level = per_level;
  p.K = K;
  p.base_scale = base_scale;
  const auto coll = multiest::lacunary_collection(p);
  const auto rep = multiest::rank1_check(coll);
  std::cout << "tiles=" << coll.tiles.size() << " rank1_ok=" << (rep.ok ? "yes" : "no")
            << " sparse_ok=" << (rep.sparse_ok ? "yes" : "no")
            << " violations=" << rep.violations.size() << "\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < coll.tiles.size(); ++i) {
    const auto& vt = coll.tiles[i];
    std::string freqs;
    for (std::size_t j = 0; j < vt.freqs.size(); ++j) {
      if (j) freqs += ';';
      freqs += "(" + std::to_string(vt.freqs[j].j) + "," + std::to_string(vt.freqs[j].k) + "," +
               std::to_string(vt.freqs[j].alpha_index) + ")";
    }
    rows.push_back({std::to_string(i), std::to_string(vt.time.j), std::to_string(vt.time.k), freqs});
  }
  sink.write("tiles.csv", multiest::csv_table({"index", "time_j", "time_k", "freqs"}, rows));
  if (check && !(rep.ok && rep.sparse_ok)) return 1;
  return 0;
}

int run_audit(std::uint64_t seed, bool check, OutputSink& sink) {
  const auto& c = multiest::constants();
  const auto m = multiest::run_calibration(seed);
  struct Row {
    const char* name;
    double measured, cap;
  };
  const double jn_ratio = std::max(m.jn_max, m.jn_min > 0 ? 1.0 / m.jn_min : 0.0);
  const std::vector<Row> checks = {
      {"jn_comparability", jn_ratio, c.c_jn},
      {"energy_l2", m.cal_max, c.c_cal},
      {"tool_16", m.tool_max_16, c.c_tool_16},
      {"tool_64", m.tool_max_64, c.c_tool},
      {"tool_growth", m.tool_max_64 / std::max(m.tool_max_16, 1e-300), 2.0},
      {"bessel", m.bessel_max, c.c_bessel},
      {"strat_measure", m.strat_max, c.c_strat},
      {"strat_failures", static_cast<double>(m.strat_failures), 0.0},
  };
  bool ok = true;
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : checks) {
    const bool pass = r.measured <= r.cap;
    ok = ok && pass;
    rows.push_back({r.name, format_double(r.measured), format_double(r.cap), pass ? "pass" : "fail"});
    std::cout << r.name << " measured=" << format_double(r.measured)
              << " cap=" << format_double(r.cap) << (pass ? " pass" : " FAIL") << "\n";
  }
  sink.write("audit.csv", multiest::csv_table({"check", "measured", "cap", "status"}, rows));
  return check && !ok ? 1 : 0;
}

int run_bessel(int k1, int k2_lo, int k2_hi, int trials, std::uint64_t seed, int s, bool check,
               OutputSink& sink) {
  const auto probe = multiest::delicate_decay_probe(k1, k2_lo, k2_hi, trials, seed, s);
  std::vector<std::vector<std::string>> rows;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < probe.k2_values.size(); ++i) {
    rows.push_back({std::to_string(probe.k2_values[i]), format_double(probe.log2_values[i])});
    xs.push_back(static_cast<double>(probe.k2_values[i]));
    ys.push_back(probe.log2_values[i]);
  }
  std::cout << "bessel slope=" << format_double(probe.slope) << "\n";
  sink.write("bessel.csv", multiest::csv_table({"k2", "log2_abs_sum"}, rows));
  const auto fit = fit_line(xs, ys);
  std::vector<double> fy;
  for (double x : xs) fy.push_back(fit.intercept + fit.slope * x);
  sink.write("bessel.svg",
             multiest::svg_plot({{"log2|sum|", "#1f77b4", xs, ys}, {"fit", "#2ca02c", xs, fy}},
                                "Bessel decay probe", 800, 500));
  if (check && !(probe.slope <= -1.0)) return 1;
  return 0;
}

int run_akns(std::size_t N, double L, long band, std::uint64_t seed, double d1, double d2,
             double lambda_lo, double lambda_step, int lambda_count, double C, double Ctilde,
             bool check, OutputSink& sink) {
  auto f = multiest::from_preset(multiest::Preset::random_bandlimited(band, seed), N, L);
  std::vector<double> lambdas;
  for (int t = 0; t < lambda_count; ++t) {
    lambdas.push_back(lambda_lo + lambda_step * static_cast<double>(t));
  }
  const auto rows_data = multiest::carleson_bound_check(f, d1, d2, lambdas, C, Ctilde);
  std::vector<std::vector<std::string>> rows;
  double worst = 0.0;
  for (const auto& r : rows_data) {
    worst = std::max(worst, r.ratio);
    rows.push_back({format_double(r.lambda), format_double(r.lambda_snapped),
                    format_double(r.snap_error), format_double(r.sup_v1),
                    format_double(r.carleson_value), format_double(r.bound),
                    format_double(r.ratio)});
  }
  std::cout << "akns lambdas=" << lambda_count << " max_ratio=" << format_double(worst) << "\n";
  sink.write("akns.csv",
             multiest::csv_table({"lambda", "lambda_snapped", "snap_error", "sup_v1",
                                  "carleson_value", "bound", "ratio"},
                                 rows));
  if (check && !(worst <= 1.0 + 1e-6)) return 1;
  return 0;
}

int run_selfcheck(int only, OutputSink& sink) {
  std::vector<multiest::CriterionResult> results;
  if (only > 0) {
    results.push_back(multiest::run_criterion(only));
  } else {
    results = multiest::run_all_criteria();
  }
  bool all = true;
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << "criterion " << r.index << " [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name
              << " (" << format_double(r.seconds) << "s): " << r.detail << "\n";
    rows.push_back({std::to_string(r.index), r.name, r.pass ? "pass" : "fail",
                    format_double(r.seconds), r.detail});
  }
  std::cout << (all ? "ALL CRITERIA PASS" : "ACCEPTANCE FAILURE") << "\n";
  sink.write("selfcheck.csv",
             multiest::csv_table({"index", "name", "status", "seconds", "detail"}, rows));
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiest: simplex-multiplier operator toolkit"};
  app.require_subcommand(1);

  // Shared plumbing registered per subcommand.
  struct Common {
    std::string config_path;
    std::string out_dir;
    bool check = false;
  };
  auto add_common = [](CLI::App* sub, Common* c, bool with_check) {
    sub->add_option("--config", c->config_path, "JSON config file (unknown keys rejected)");
    sub->add_option("--out", c->out_dir, "output directory for CSV/SVG/manifest");
    if (with_check) sub->add_flag("--check", c->check, "exit 1 on acceptance-threshold failure");
  };

  // trees
  auto* trees = app.add_subcommand("trees", "tree enumeration + region coverage");
  Common trees_c;
  int trees_n = 3;
  double trees_csep = 16.0, trees_ccomp = 4.0, trees_cdist = 4.0;
  std::size_t trees_samples = 20000;
  std::uint64_t trees_seed = 1;
  ConfigBinder trees_b("trees");
  add_common(trees, &trees_c, false);
  trees_b.bind(trees->add_option("--n", trees_n, "number of leaves"), "n", &trees_n);
  trees_b.bind(trees->add_option("--c-sep", trees_csep, "separation constant"), "c_sep", &trees_csep);
  trees_b.bind(trees->add_option("--c-comp", trees_ccomp, "comparability constant"), "c_comp", &trees_ccomp);
  trees_b.bind(trees->add_option("--c-dist", trees_cdist, "distance constant"), "c_dist", &trees_cdist);
  trees_b.bind(trees->add_option("--samples", trees_samples, "coverage samples"), "samples", &trees_samples);
  trees_b.bind(trees->add_option("--seed", trees_seed, "sampling seed"), "seed", &trees_seed);

  // partition
  auto* partition = app.add_subcommand("partition", "telescope residual scan");
  Common part_c;
  int part_n = 3, part_trunc = 8;
  double part_csep = 4.0, part_ccomp = 4.0, part_cdist = 4.0, part_range = 9.0;
  std::size_t part_samples = 10000;
  std::uint64_t part_seed = 7;
  ConfigBinder part_b("partition");
  add_common(partition, &part_c, true);
  part_b.bind(partition->add_option("--n", part_n, "number of frequencies"), "n", &part_n);
  part_b.bind(partition->add_option("--trunc", part_trunc, "scale truncation"), "trunc", &part_trunc);
  part_b.bind(partition->add_option("--c-sep", part_csep, "separation constant"), "c_sep", &part_csep);
  part_b.bind(partition->add_option("--c-comp", part_ccomp, "comparability constant"), "c_comp", &part_ccomp);
  part_b.bind(partition->add_option("--c-dist", part_cdist, "distance constant"), "c_dist", &part_cdist);
  part_b.bind(partition->add_option("--samples", part_samples, "sample count"), "samples", &part_samples);
  part_b.bind(partition->add_option("--seed", part_seed, "sampling seed"), "seed", &part_seed);
  part_b.bind(partition->add_option("--gap-range", part_range, "log2 gap range"), "gap_range", &part_range);

  // apply
  auto* apply = app.add_subcommand("apply", "evaluate an operator on preset inputs");
  Common apply_c;
  std::string apply_op = "simplex";
  int apply_n = 2;
  std::size_t apply_N = 512;
  double apply_L = 8.0;
  std::vector<std::string> apply_presets;
  ConfigBinder apply_b("apply");
  add_common(apply, &apply_c, false);
  apply_b.bind(apply->add_option("--op", apply_op, "simplex|maximal|alternating|bht|t3plus|t3minus"),
               "op", &apply_op);
  apply_b.bind(apply->add_option("--n", apply_n, "arity for simplex forms"), "n", &apply_n);
  apply_b.bind(apply->add_option("--N", apply_N, "grid size"), "N", &apply_N);
  apply_b.bind(apply->add_option("--L", apply_L, "period"), "L", &apply_L);
  apply_b.bind_string_list(
      apply->add_option("--preset", apply_presets,
                        "input preset, one per slot (mode:k | chirp:sign[:rate] | "
                        "gauss:c:w[:mod] | ind:a:b | rand:band:seed)"),
      "presets", &apply_presets);

  // norm-scan
  auto* norm_scan = app.add_subcommand("norm-scan", "Hoelder ratios vs N");
  Common norm_c;
  int norm_n = 2;
  long norm_band = 16;
  std::size_t norm_trials = 10, norm_nmax = 4096;
  std::uint64_t norm_seed = 11;
  ConfigBinder norm_b("norm-scan");
  add_common(norm_scan, &norm_c, false);
  norm_b.bind(norm_scan->add_option("--n", norm_n, "arity"), "n", &norm_n);
  norm_b.bind(norm_scan->add_option("--band", norm_band, "input band"), "band", &norm_band);
  norm_b.bind(norm_scan->add_option("--trials", norm_trials, "inputs per N"), "trials", &norm_trials);
  norm_b.bind(norm_scan->add_option("--Nmax", norm_nmax, "largest grid"), "Nmax", &norm_nmax);
  norm_b.bind(norm_scan->add_option("--seed", norm_seed, "input seed"), "seed", &norm_seed);

  // chirp
  auto* chirp = app.add_subcommand("chirp", "T3 vs T3-tilde over window sizes");
  Common chirp_c;
  double chirp_rate = 0.016;
  int chirp_emin = 4, chirp_emax = 12;
  std::size_t chirp_nmax = 262144, chirp_out = 4096;
  ConfigBinder chirp_b("chirp");
  add_common(chirp, &chirp_c, true);
  chirp_b.bind(chirp->add_option("--rate", chirp_rate, "chirp rate r in e^{i r x^2}"), "rate", &chirp_rate);
  chirp_b.bind(chirp->add_option("--emin", chirp_emin, "smallest window exponent"), "emin", &chirp_emin);
  chirp_b.bind(chirp->add_option("--emax", chirp_emax, "largest window exponent"), "emax", &chirp_emax);
  chirp_b.bind(chirp->add_option("--Nmax", chirp_nmax, "per-window grid cap"), "Nmax", &chirp_nmax);
  chirp_b.bind(chirp->add_option("--out-samples", chirp_out, "output subsampling"), "out_samples", &chirp_out);

  // tiles
  auto* tiles = app.add_subcommand("tiles", "lacunary rank-1 generation");
  Common tiles_c;
  int tiles_d = 3, tiles_levels = 4, tiles_per = 4, tiles_K = 3, tiles_base = 0;
  ConfigBinder tiles_b("tiles");
  add_common(tiles, &tiles_c, true);
  tiles_b.bind(tiles->add_option("--d", tiles_d, "vector tile dimension"), "d", &tiles_d);
  tiles_b.bind(tiles->add_option("--levels", tiles_levels, "scale count"), "levels", &tiles_levels);
  tiles_b.bind(tiles->add_option("--per-level", tiles_per, "tiles per scale"), "per_level", &tiles_per);
  tiles_b.bind(tiles->add_option("--K", tiles_K, "frequency offset multiplier"), "K", &tiles_K);
  tiles_b.bind(tiles->add_option("--base-scale", tiles_base, "finest time scale"), "base_scale", &tiles_base);

  // audit
  auto* audit = app.add_subcommand("audit", "size/energy/tool/stratify ensembles");
  Common audit_c;
  std::uint64_t audit_seed = multiest::constants().seed;
  ConfigBinder audit_b("audit");
  add_common(audit, &audit_c, true);
  audit_b.bind(audit->add_option("--seed", audit_seed, "ensemble seed"), "seed", &audit_seed);

  // bessel
  auto* bessel = app.add_subcommand("bessel", "delicate Bessel decay probe");
  Common bessel_c;
  int bessel_k1 = 1, bessel_lo = 4, bessel_hi = 9, bessel_trials = 3, bessel_s = 6;
  std::uint64_t bessel_seed = 5;
  ConfigBinder bessel_b("bessel");
  add_common(bessel, &bessel_c, true);
  bessel_b.bind(bessel->add_option("--k1", bessel_k1, "P-scale exponent"), "k1", &bessel_k1);
  bessel_b.bind(bessel->add_option("--k2-lo", bessel_lo, "smallest Q-scale exponent"), "k2_lo", &bessel_lo);
  bessel_b.bind(bessel->add_option("--k2-hi", bessel_hi, "largest Q-scale exponent"), "k2_hi", &bessel_hi);
  bessel_b.bind(bessel->add_option("--trials", bessel_trials, "phase draws per scale"), "trials", &bessel_trials);
  bessel_b.bind(bessel->add_option("--seed", bessel_seed, "phase seed"), "seed", &bessel_seed);
  bessel_b.bind(bessel->add_option("--s", bessel_s, "packet smoothness"), "s", &bessel_s);

  // akns
  auto* akns = app.add_subcommand("akns", "Carleson bound lambda sweep");
  Common akns_c;
  std::size_t akns_N = 1024;
  double akns_L = 16.0, akns_d1 = 1.0, akns_d2 = -1.0;
  double akns_lo = -4.0 + 0.01, akns_step = 0.25;
  int akns_count = 32;
  long akns_band = 40;
  std::uint64_t akns_seed = 2024;
  double akns_C = 1.0, akns_Ct = 1.0;
  ConfigBinder akns_b("akns");
  add_common(akns, &akns_c, true);
  akns_b.bind(akns->add_option("--N", akns_N, "grid size"), "N", &akns_N);
  akns_b.bind(akns->add_option("--L", akns_L, "period"), "L", &akns_L);
  akns_b.bind(akns->add_option("--band", akns_band, "potential band"), "band", &akns_band);
  akns_b.bind(akns->add_option("--seed", akns_seed, "potential seed"), "seed", &akns_seed);
  akns_b.bind(akns->add_option("--d1", akns_d1, "first diagonal entry"), "d1", &akns_d1);
  akns_b.bind(akns->add_option("--d2", akns_d2, "second diagonal entry"), "d2", &akns_d2);
  akns_b.bind(akns->add_option("--lambda-lo", akns_lo, "first lambda"), "lambda_lo", &akns_lo);
  akns_b.bind(akns->add_option("--lambda-step", akns_step, "lambda spacing"), "lambda_step", &akns_step);
  akns_b.bind(akns->add_option("--lambda-count", akns_count, "lambda count"), "lambda_count", &akns_count);
  akns_b.bind(akns->add_option("--C", akns_C, "Carleson coefficient"), "C", &akns_C);
  akns_b.bind(akns->add_option("--Ctilde", akns_Ct, "additive constant"), "Ctilde", &akns_Ct);

  // selfcheck
  auto* selfcheck = app.add_subcommand("selfcheck", "run the acceptance suite");
  Common self_c;
  int self_only = 0;
  ConfigBinder self_b("selfcheck");
  add_common(selfcheck, &self_c, false);
  self_b.bind(selfcheck->add_option("--only", self_only, "run a single criterion (1..10)"),
              "only", &self_only);

  try {
    app.parse(argc, argv);

    auto make_sink = [](const Common& c, ConfigBinder& b) {
      b.apply_file(c.config_path);
      OutputSink sink;
      sink.dir = c.out_dir;
      sink.config = b.effective();
      return sink;
    };

    int rc = 0;
    if (trees->parsed()) {
      auto sink = make_sink(trees_c, trees_b);
      multiest::RegionParams rp{trees_csep, trees_ccomp, trees_cdist};
      rc = run_trees(trees_n, rp, trees_samples, trees_seed, sink);
      sink.finish();
    } else if (partition->parsed()) {
      auto sink = make_sink(part_c, part_b);
      multiest::RegionParams rp{part_csep, part_ccomp, part_cdist};
      rc = run_partition(part_n, rp, part_trunc, part_samples, part_seed, part_range,
                         part_c.check, sink);
      sink.finish();
    } else if (apply->parsed()) {
      auto sink = make_sink(apply_c, apply_b);
      rc = run_apply(apply_op, apply_n, apply_N, apply_L, apply_presets, sink);
      sink.finish();
    } else if (norm_scan->parsed()) {
      auto sink = make_sink(norm_c, norm_b);
      rc = run_norm_scan(norm_n, norm_band, norm_trials, norm_seed, norm_nmax, sink);
      sink.finish();
    } else if (chirp->parsed()) {
      auto sink = make_sink(chirp_c, chirp_b);
      rc = run_chirp(chirp_rate, chirp_emin, chirp_emax, chirp_nmax, chirp_out, chirp_c.check,
                     sink);
      sink.finish();
    } else if (tiles->parsed()) {
      auto sink = make_sink(tiles_c, tiles_b);
      rc = run_tiles(tiles_d, tiles_levels, tiles_per, tiles_K, tiles_base, tiles_c.check, sink);
      sink.finish();
    } else if (audit->parsed()) {
      auto sink = make_sink(audit_c, audit_b);
      rc = run_audit(audit_seed, audit_c.check, sink);
      sink.finish();
    } else if (bessel->parsed()) {
      auto sink = make_sink(bessel_c, bessel_b);
      rc = run_bessel(bessel_k1, bessel_lo, bessel_hi, bessel_trials, bessel_seed, bessel_s,
                      bessel_c.check, sink);
      sink.finish();
    } else if (akns->parsed()) {
      auto sink = make_sink(akns_c, akns_b);
      rc = run_akns(akns_N, akns_L, akns_band, akns_seed, akns_d1, akns_d2, akns_lo, akns_step,
                    akns_count, akns_C, akns_Ct, akns_c.check, sink);
      sink.finish();
    } else if (selfcheck->parsed()) {
      auto sink = make_sink(self_c, self_b);
      rc = run_selfcheck(self_only, sink);
      sink.finish();
    }
    return rc;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const multiest::guard_error& e) {
    std::cerr << "guard error: " << e.what() << "\n";
    return 3;
  } catch (const multiest::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
