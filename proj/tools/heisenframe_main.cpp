#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heisenframe/baseline.hpp"
#include "heisenframe/frames.hpp"
#include "heisenframe/grid.hpp"
#include "heisenframe/io.hpp"
#include "heisenframe/representations.hpp"
#include "heisenframe/version.hpp"
#include "heisenframe/weil.hpp"

namespace hf = heisenframe;
using nlohmann::json;

namespace {

std::vector<double> split_doubles(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t next = csv.find(',', pos);
    std::string tok = csv.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw std::invalid_argument("not a number: '" + tok + "'");
    out.push_back(v);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

std::vector<double> widths_for(std::size_t n, const std::string& csv) {
  std::vector<double> v = split_doubles(csv);
  std::size_t axes = 2 * n + 1;
  if (v.size() == 1) return std::vector<double>(axes, v[0]);
  if (v.size() != axes) {
    throw std::invalid_argument("--widths needs one value or one per axis (2n+1)");
  }
  return v;
}

std::string digest_of(const std::map<std::string, std::string>& eff) {
  std::string canon;
  for (const auto& [k, v] : eff) {
    canon += k;
    canon += '=';
    canon += v;
    canon += '\n';
  }
  return hf::hex64(hf::fnv1a64(canon));
}

json base_summary(const std::string& cmd,
                  const std::map<std::string, std::string>& eff) {
  json j;
  j["version"] = hf::kVersionString;
  j["command"] = cmd;
  j["config_digest"] = digest_of(eff);
  return j;
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

// Pre-pass: splice the config file's entries in as flags right after the
// subcommand token. User flags come later on the line, and every option
// takes the last occurrence, so explicit flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  json cfg = json::parse(in, nullptr, false);
  if (cfg.is_discarded() || !cfg.is_object()) {
    throw std::invalid_argument("config file is not a JSON object: " + path);
  }

  std::size_t sub = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!args[i].empty() && args[i][0] != '-') {
      sub = i;
      break;
    }
  }
  if (sub == args.size()) return args;

  std::vector<std::string> flags;
  for (const auto& [k, v] : cfg.items()) {
    flags.push_back("--" + k);
    flags.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
  args.insert(args.begin() + static_cast<long>(sub) + 1, flags.begin(), flags.end());
  return args;
}

hf::PerturbationScheme make_scheme(const std::string& name, std::size_t n,
                                   const hf::Truncation& trunc, double M,
                                   std::uint64_t seed) {
  if (name == "harmonic") return hf::PerturbationScheme::harmonic(n, trunc);
  if (name == "alternating") return hf::PerturbationScheme::alternating(n, trunc, M);
  if (name == "uniform-shift") {
    return hf::PerturbationScheme::uniform_omega_shift(n, trunc, M);
  }
  if (name == "random") return hf::PerturbationScheme::random(n, trunc, M, seed);
  throw std::invalid_argument("unknown scheme: " + name);
}

double rel_diff(double x, double y) {
  double d = std::abs(x - y);
  double m = std::max({std::abs(x), std::abs(y), 1e-300});
  return d / m;
}

struct ParsevalOpts {
  std::size_t n = 1;
  std::size_t grid = 64;
  int Kxy = 8;
  int Kt = 8;
  std::string widths = "0.9";
  std::string out;
  std::string config;
};

int run_parseval(const ParsevalOpts& o) {
  hf::GridSpec spec = hf::GridSpec::reproducing(o.n, o.grid);
  hf::GridFunction f = hf::make_bump(spec, widths_for(o.n, o.widths));
  hf::PerturbationScheme s =
      hf::PerturbationScheme::harmonic(o.n, hf::Truncation(o.Kxy, o.Kt));
  hf::QuadraticForms qf = hf::quadratic_forms(f, s);
  double nrm = hf::norm_sq(f);
  double ratio = hf::kHaarScale * qf.p / nrm;

  std::map<std::string, std::string> eff = {
      {"command", "parseval-check"}, {"n", std::to_string(o.n)},
      {"grid", std::to_string(o.grid)}, {"Kxy", std::to_string(o.Kxy)},
      {"Kt", std::to_string(o.Kt)}, {"widths", o.widths}, {"out", o.out}};
  json j = base_summary("parseval-check", eff);
  j["ratio"] = ratio;
  j["q"] = qf.q;
  j["r"] = qf.r;
  j["phi"] = qf.phi;
  j["p"] = qf.p;
  j["norm_sq"] = nrm;
  if (!o.out.empty()) hf::atomic_write_file(o.out, j.dump() + "\n");
  emit(j);
  return 0;
}

struct HsOpts {
  std::size_t n = 1;
  std::size_t grid = 64;
  std::string omegas = "2,-2,4";
  int Kxy = 8;
  double windowL = 4.0;
  std::size_t refine = 1;
  std::string widths = "0.9";
  std::string config;
};

int run_hs(const HsOpts& o) {
  if (o.n != 1) throw std::invalid_argument("hs-oracle: the kernel route needs n = 1");
  hf::GridSpec spec = hf::GridSpec::reproducing(o.n, o.grid);
  hf::GridFunction f = hf::make_bump(spec, widths_for(o.n, o.widths));
  hf::WindowSpec wspec = hf::WindowSpec::matched(spec, o.windowL, o.refine);

  std::map<std::string, std::string> eff = {
      {"command", "hs-oracle"}, {"n", std::to_string(o.n)},
      {"grid", std::to_string(o.grid)}, {"omega", o.omegas},
      {"Kxy", std::to_string(o.Kxy)}, {"window-L", hf::format_g17(o.windowL)},
      {"refine", std::to_string(o.refine)}, {"widths", o.widths}};
  json j = base_summary("hs-oracle", eff);
  json rows = json::array();
  double overall = 0.0;
  for (double w : split_doubles(o.omegas)) {
    hf::SchrodingerRep rep(w);
    double vi = hf::hs_norm_sq_integral(rep, f);
    double vl = hf::hs_norm_sq_lattice(rep, f, o.Kxy);
    double vk = hf::hs_norm_sq_kernel(rep, f, wspec);
    double mx = std::max({rel_diff(vi, vl), rel_diff(vi, vk), rel_diff(vl, vk)});
    overall = std::max(overall, mx);
    rows.push_back({{"omega", w},
                    {"integral", vi},
                    {"lattice", vl},
                    {"kernel", vk},
                    {"max_rel_diff", mx}});
  }
  j["rows"] = rows;
  j["max_rel_diff"] = overall;
  emit(j);
  return 0;
}

struct BoundsOpts {
  std::size_t n = 1;
  std::string scheme = "alternating";
  double M = 0.05;
  std::uint64_t seed = 0;
  int Kxy = 4;
  int Kt = 4;
  bool weighted = true;
  std::string out;
  std::string config;
};

int run_bounds(const BoundsOpts& o) {
  hf::PerturbationScheme s =
      make_scheme(o.scheme, o.n, hf::Truncation(o.Kxy, o.Kt), o.M, o.seed);
  hf::BoundsReport rep = hf::frame_bounds(s, o.weighted);

  std::map<std::string, std::string> eff = {
      {"command", "frame-bounds"}, {"n", std::to_string(o.n)},
      {"scheme", o.scheme}, {"M", hf::format_g17(o.M)},
      {"seed", std::to_string(o.seed)}, {"Kxy", std::to_string(o.Kxy)},
      {"Kt", std::to_string(o.Kt)}, {"weighted", o.weighted ? "true" : "false"},
      {"out", o.out}};
  json j = base_summary("frame-bounds", eff);
  j.update(json::parse(hf::bounds_report_json(rep)));
  if (!o.out.empty()) hf::atomic_write_file(o.out, hf::bounds_report_json(rep) + "\n");
  emit(j);
  return 0;
}

struct SweepOpts {
  std::size_t n = 1;
  std::string scheme = "alternating";
  std::string Ms = "0.2,0.1,0.05,0.01";
  std::uint64_t seed = 0;
  int Kxy = 4;
  int Kt = 4;
  bool weighted = true;
  std::string out = "sweep.csv";
  std::string config;
};

int run_sweep(const SweepOpts& o) {
  std::vector<double> Ms = split_doubles(o.Ms);
  std::string csv = "M,A_est,B_est,envelope_lo,envelope_hi,C_M,T_est\n";
  for (double M : Ms) {
    hf::PerturbationScheme s =
        make_scheme(o.scheme, o.n, hf::Truncation(o.Kxy, o.Kt), M, o.seed);
    hf::BoundsReport rep = hf::frame_bounds(s, o.weighted);
    csv += hf::format_g17(M) + "," + hf::format_g17(rep.A_est) + "," +
           hf::format_g17(rep.B_est) + "," + hf::format_g17(rep.envelope_lo) + "," +
           hf::format_g17(rep.envelope_hi) + "," + hf::format_g17(rep.C_M) + "," +
           hf::format_g17(rep.T_est) + "\n";
  }
  hf::atomic_write_file(o.out, csv);

  std::map<std::string, std::string> eff = {
      {"command", "sweep"}, {"n", std::to_string(o.n)}, {"scheme", o.scheme},
      {"Ms", o.Ms}, {"seed", std::to_string(o.seed)},
      {"Kxy", std::to_string(o.Kxy)}, {"Kt", std::to_string(o.Kt)},
      {"weighted", o.weighted ? "true" : "false"}, {"out", o.out}};
  json j = base_summary("sweep", eff);
  j["rows"] = Ms.size();
  j["out"] = o.out;
  j["csv_digest"] = hf::hex64(hf::fnv1a64(csv));
  emit(j);
  return 0;
}

struct ReconstructOpts {
  std::size_t n = 1;
  std::size_t grid = 64;
  std::string scheme = "alternating";
  double M = 0.05;
  int Kxy = 3;
  int Kt = 3;
  std::uint64_t seed = 0;
  std::string method = "gram-solve";
  double tol = 1e-6;
  int maxIter = 200;
  std::string out;
  std::string config;
};

int run_reconstruct(const ReconstructOpts& o) {
  hf::GridSpec spec = hf::GridSpec::reproducing(o.n, o.grid);
  hf::Truncation trunc(o.Kxy, o.Kt);
  hf::PerturbationScheme s = make_scheme(o.scheme, o.n, trunc, o.M, o.seed);

  // Synthetic in-span target with reproducible coefficients.
  hf::CoefficientTable gt;
  gt.n = o.n;
  gt.trunc = trunc;
  gt.convention = hf::Convention::kHaarNormalized;
  std::mt19937_64 rng(o.seed);
  auto draw = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (std::size_t i = 0; i < trunc.index_count(o.n); ++i) {
    double re = 2.0 * draw() - 1.0;
    double im = 2.0 * draw() - 1.0;
    gt.values.emplace_back(re, im);
  }
  hf::GridFunction truth = hf::synthesize(gt, s, spec);
  hf::CoefficientTable c = hf::analysis(truth, s, hf::Convention::kHaarNormalized);

  hf::ReconstructMethod method;
  if (o.method == "gram-solve") {
    method = hf::ReconstructMethod::kGramSolve;
  } else if (o.method == "frame-iteration") {
    method = hf::ReconstructMethod::kFrameIteration;
  } else {
    throw std::invalid_argument("unknown method: " + o.method);
  }
  hf::ReconstructResult res = hf::reconstruct(c, s, spec, method, o.tol, o.maxIter);

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < truth.values.size(); ++i) {
    num += std::norm(res.f.values[i] - truth.values[i]);
    den += std::norm(truth.values[i]);
  }
  double err = den > 0.0 ? std::sqrt(num / den) : 0.0;

  std::map<std::string, std::string> eff = {
      {"command", "reconstruct"}, {"n", std::to_string(o.n)},
      {"grid", std::to_string(o.grid)}, {"scheme", o.scheme},
      {"M", hf::format_g17(o.M)}, {"Kxy", std::to_string(o.Kxy)},
      {"Kt", std::to_string(o.Kt)}, {"seed", std::to_string(o.seed)},
      {"method", o.method}, {"tol", hf::format_g17(o.tol)},
      {"max-iter", std::to_string(o.maxIter)}, {"out", o.out}};
  json j = base_summary("reconstruct", eff);
  j["method"] = o.method;
  j["relative_error"] = err;
  j["residual"] = res.residual;
  j["iterations"] = res.iterations;
  if (!o.out.empty()) hf::write_grid_hgf1(o.out, res.f);
  emit(j);
  return 0;
}

struct WeilOpts {
  std::size_t n = 1;
  std::size_t grid = 64;
  std::string widths = "0.9";
  std::size_t radius = 0;
  std::string config;
};

int run_weil(const WeilOpts& o) {
  hf::GridSpec spec = hf::GridSpec::reproducing(o.n, o.grid);
  hf::GridFunction f = hf::make_bump(spec, widths_for(o.n, o.widths));
  std::size_t radius = o.radius == 0 ? hf::default_gamma_radius(spec) : o.radius;
  auto [lhs, rhs] = hf::weil_check(f, radius);
  double rel = std::abs(lhs - rhs) /
               std::max({std::abs(lhs), std::abs(rhs), 1e-300});

  std::map<std::string, std::string> eff = {
      {"command", "weil-check"}, {"n", std::to_string(o.n)},
      {"grid", std::to_string(o.grid)}, {"widths", o.widths},
      {"radius", std::to_string(o.radius)}};
  json j = base_summary("weil-check", eff);
  j["lhs_re"] = lhs.real();
  j["lhs_im"] = lhs.imag();
  j["rhs_re"] = rhs.real();
  j["rhs_im"] = rhs.imag();
  j["rel_diff"] = rel;
  j["radius_used"] = radius;
  emit(j);
  return 0;
}

struct DsOpts {
  int K = 16;
  std::string scheme = "alternating";
  double M = 0.2;
  double shift = 0.25;
  std::string out;
  std::string config;
};

int run_ds(const DsOpts& o) {
  hf::OmegaSequence seq = [&] {
    if (o.scheme == "harmonic") return hf::OmegaSequence::harmonic(o.K);
    if (o.scheme == "uniform-shift") return hf::OmegaSequence::uniform_shift(o.K, o.shift);
    if (o.scheme == "alternating") return hf::OmegaSequence::alternating(o.K, o.M);
    throw std::invalid_argument("unknown scheme: " + o.scheme);
  }();
  hf::BoundsReport rep = hf::ds_frame_bounds(seq);

  std::map<std::string, std::string> eff = {
      {"command", "ds-baseline"}, {"K", std::to_string(o.K)},
      {"scheme", o.scheme}, {"M", hf::format_g17(o.M)},
      {"shift", hf::format_g17(o.shift)}, {"out", o.out}};
  json j = base_summary("ds-baseline", eff);
  j.update(json::parse(hf::bounds_report_json(rep)));
  if (!o.out.empty()) hf::atomic_write_file(o.out, hf::bounds_report_json(rep) + "\n");
  emit(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Operator-valued frame estimates on the Heisenberg group"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  ParsevalOpts pv;
  CLI::App* c_pv = app.add_subcommand("parseval-check", "Harmonic Parseval ratio for a bump");
  c_pv->add_option("--n", pv.n);
  c_pv->add_option("--grid", pv.grid);
  c_pv->add_option("--Kxy", pv.Kxy);
  c_pv->add_option("--Kt", pv.Kt);
  c_pv->add_option("--widths", pv.widths);
  c_pv->add_option("--out", pv.out);
  c_pv->add_option("--config", pv.config);

  HsOpts hs;
  CLI::App* c_hs = app.add_subcommand("hs-oracle", "Hilbert-Schmidt norm, three routes");
  c_hs->add_option("--n", hs.n);
  c_hs->add_option("--grid", hs.grid);
  c_hs->add_option("--omega", hs.omegas);
  c_hs->add_option("--Kxy", hs.Kxy);
  c_hs->add_option("--window-L", hs.windowL);
  c_hs->add_option("--refine", hs.refine);
  c_hs->add_option("--widths", hs.widths);
  c_hs->add_option("--config", hs.config);

  BoundsOpts fb;
  CLI::App* c_fb = app.add_subcommand("frame-bounds", "Truncated-span frame bounds for one scheme");
  c_fb->add_option("--n", fb.n);
  c_fb->add_option("--scheme", fb.scheme);
  c_fb->add_option("--M", fb.M);
  c_fb->add_option("--seed", fb.seed);
  c_fb->add_option("--Kxy", fb.Kxy);
  c_fb->add_option("--Kt", fb.Kt);
  c_fb->add_option("--weighted", fb.weighted);
  c_fb->add_option("--out", fb.out);
  c_fb->add_option("--config", fb.config);

  SweepOpts sw;
  CLI::App* c_sw = app.add_subcommand("sweep", "Frame bounds and envelope across deviations");
  c_sw->add_option("--n", sw.n);
  c_sw->add_option("--scheme", sw.scheme);
  c_sw->add_option("--Ms", sw.Ms);
  c_sw->add_option("--seed", sw.seed);
  c_sw->add_option("--Kxy", sw.Kxy);
  c_sw->add_option("--Kt", sw.Kt);
  c_sw->add_option("--weighted", sw.weighted);
  c_sw->add_option("--out", sw.out);
  c_sw->add_option("--config", sw.config);

  ReconstructOpts rc;
  CLI::App* c_rc = app.add_subcommand("reconstruct", "Round-trip recovery of an in-span function");
  c_rc->add_option("--n", rc.n);
  c_rc->add_option("--grid", rc.grid);
  c_rc->add_option("--scheme", rc.scheme);
  c_rc->add_option("--M", rc.M);
  c_rc->add_option("--Kxy", rc.Kxy);
  c_rc->add_option("--Kt", rc.Kt);
  c_rc->add_option("--seed", rc.seed);
  c_rc->add_option("--method", rc.method);
  c_rc->add_option("--tol", rc.tol);
  c_rc->add_option("--max-iter", rc.maxIter);
  c_rc->add_option("--out", rc.out);
  c_rc->add_option("--config", rc.config);

  WeilOpts wl;
  CLI::App* c_wl = app.add_subcommand("weil-check", "Haar-integral consistency across the lattice");
  c_wl->add_option("--n", wl.n);
  c_wl->add_option("--grid", wl.grid);
  c_wl->add_option("--widths", wl.widths);
  c_wl->add_option("--radius", wl.radius);
  c_wl->add_option("--config", wl.config);

  DsOpts ds;
  CLI::App* c_ds = app.add_subcommand("ds-baseline", "One-dimensional perturbed-exponential baseline");
  c_ds->add_option("--K", ds.K);
  c_ds->add_option("--scheme", ds.scheme);
  c_ds->add_option("--M", ds.M);
  c_ds->add_option("--shift", ds.shift);
  c_ds->add_option("--out", ds.out);
  c_ds->add_option("--config", ds.config);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_pv->parsed()) return run_parseval(pv);
    if (c_hs->parsed()) return run_hs(hs);
    if (c_fb->parsed()) return run_bounds(fb);
    if (c_sw->parsed()) return run_sweep(sw);
    if (c_rc->parsed()) return run_reconstruct(rc);
    if (c_wl->parsed()) return run_weil(wl);
    if (c_ds->parsed()) return run_ds(ds);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const hf::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const hf::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
