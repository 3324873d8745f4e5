// assouad-lab: command-line front end over the C interface.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "assouad_lab/assouad_lab.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitVerifyFailed = 4;
constexpr int kExitInternal = 1;

struct Failure {
  al_status status;
  std::string message;
};

void check(al_status s) {
  if (s != AL_OK) throw Failure{s, al_last_error()};
}

int exit_code_for(al_status s) {
  switch (s) {
    case AL_ERR_EMPTY_SET:
    case AL_ERR_RESOLUTION_EXCEEDED:
    case AL_ERR_LEVEL_OUT_OF_RANGE:
    case AL_ERR_SCALE_BELOW_RESOLUTION:
    case AL_ERR_WINDOW_TOO_NARROW:
    case AL_ERR_POLE_PROXIMITY:
    case AL_ERR_SPECTRUM_UNDEFINED:
    case AL_ERR_THETA_OUT_OF_RANGE:
      return kExitInfeasible;
    case AL_ERR_INTERNAL:
      return kExitInternal;
    default:
      return kExitUsage;
  }
}

struct Deleter {
  void operator()(al_pointset* p) const { al_pointset_free(p); }
  void operator()(al_index* p) const { al_index_free(p); }
  void operator()(al_spectrum* p) const { al_spectrum_free(p); }
  void operator()(al_map* p) const { al_map_free(p); }
  void operator()(char* p) const { al_string_free(p); }
};
template <class T>
using Handle = std::unique_ptr<T, Deleter>;

std::string take(char* s) {
  Handle<char> owned(s);
  return s ? std::string(s) : std::string();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Failure{AL_ERR_IO, "Io: cannot write '" + out_path + "'"};
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

Handle<al_pointset> load(const std::string& path, double res) {
  al_pointset* ps = nullptr;
  check(al_pointset_read(path.c_str(), res, &ps));
  return Handle<al_pointset>(ps);
}

Handle<al_index> index_of(const al_pointset* ps, int max_level) {
  al_index* idx = nullptr;
  check(al_index_build(ps, max_level, &idx));
  return Handle<al_index>(idx);
}

std::string decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

// ---- gen ----
struct GenArgs {
  std::string family = "spiral";
  double a = 1.0, c = 1.0, ratio = 1.0 / 3.0, p = 1.0;
  std::optional<double> xmax, res;
  int depth = 8;
  double mmax = 1000;
  double grade = 1.0;
  std::string out;
};

int run_gen(const GenArgs& g) {
  al_family_spec spec{};
  spec.resolution = g.res.value_or(0.0);
  spec.stretch_grade = g.grade;
  if (g.family == "spiral" || g.family == "logspiral") {
    spec.kind = g.family == "spiral" ? AL_FAMILY_POLY_SPIRAL : AL_FAMILY_LOG_SPIRAL;
    spec.parameter = g.family == "spiral" ? g.a : g.c;
    if (!g.res) throw Failure{AL_ERR_INVALID_PARAMETER, "InvalidParameter: spirals need --res"};
    if (g.xmax) {
      spec.truncation = *g.xmax;
    } else {
      check(al_spiral_min_xmax(spec.kind, spec.parameter, *g.res, g.grade, &spec.truncation));
    }
  } else if (g.family == "cantor") {
    spec.kind = AL_FAMILY_CANTOR;
    spec.parameter = g.ratio;
    spec.truncation = g.depth;
  } else if (g.family == "sequence") {
    spec.kind = AL_FAMILY_SEQUENCE;
    spec.parameter = g.p;
    spec.truncation = g.mmax;
  } else {
    throw Failure{AL_ERR_INVALID_PARAMETER, "InvalidParameter: unknown family '" + g.family + "'"};
  }
  al_pointset* raw = nullptr;
  check(al_family_sample(&spec, &raw));
  Handle<al_pointset> ps(raw);
  if (g.out.empty() || g.out == "-") {
    char* csv = nullptr;
    check(al_pointset_to_csv(ps.get(), &csv));
    std::cout << take(csv);
  } else {
    check(al_pointset_write(ps.get(), g.out.c_str()));
  }
  std::cerr << "generated " << al_pointset_size(ps.get()) << " points at resolution "
            << al_pointset_resolution(ps.get()) << "\n";
  return kExitOk;
}

// ---- index-stats ----
struct InputArgs {
  std::string input;
  double res = 0.0;
  int max_level = -1;
};

int run_index_stats(const InputArgs& in, const std::string& out) {
  auto ps = load(in.input, in.res);
  auto idx = index_of(ps.get(), in.max_level);
  char* s = nullptr;
  check(al_index_stats_json(idx.get(), &s));
  emit(json::parse(take(s)).dump(2), out);
  return kExitOk;
}

// ---- estimate ----
struct EstimateArgs {
  InputArgs in;
  std::string mode = "box";
  std::vector<double> theta;
  double theta_lo = 0.05, theta_hi = 0.9, theta_step = 0.05;
  double qa_theta = 0.9;
  std::optional<double> rmin, rmax;
  int centers = 256;
  double radius_scale = 1.0;
  double rho_eps = 0.1;
  std::string out, plot;
};

int run_estimate(const EstimateArgs& e) {
  auto ps = load(e.in.input, e.in.res);
  auto idx = index_of(ps.get(), e.in.max_level);
  al_window w{};
  check(al_default_window(idx.get(), &w));
  if (e.rmin) w.r_min = *e.rmin;
  if (e.rmax) w.r_max = *e.rmax;
  al_estimator_options opts{e.centers, e.radius_scale};
  double value = 0.0;
  char* s = nullptr;
  if (e.mode == "box") {
    check(al_estimate_box(idx.get(), &w, &value, &s));
  } else if (e.mode == "assouad") {
    check(al_estimate_assouad(idx.get(), &w, &opts, &value, &s));
  } else if (e.mode == "qa") {
    check(al_estimate_quasi_assouad(idx.get(), &w, &opts, e.qa_theta, &value, &s));
  } else if (e.mode == "spectrum") {
    std::vector<double> grid = e.theta;
    if (grid.empty()) {
      for (int i = 0;; ++i) {
        const double t = e.theta_lo + i * e.theta_step;
        if (t > e.theta_hi + 1e-9) break;
        grid.push_back(std::round(t * 1e12) / 1e12);
      }
    }
    al_spectrum* raw = nullptr;
    check(al_estimate_spectrum(idx.get(), grid.data(), grid.size(), &w, &opts, &raw));
    Handle<al_spectrum> spec(raw);
    check(al_spectrum_to_json(spec.get(), &s));
    json j = json::parse(take(s));
    double rho = 1.0;
    check(al_estimate_rho(spec.get(), e.rho_eps, &rho));
    j["rho"] = rho;
    j["rho_epsilon"] = e.rho_eps;
    std::size_t absent = 0;
    for (std::size_t i = 0; i < al_spectrum_size(spec.get()); ++i) {
      double theta = 0.0;
      if (!al_spectrum_at(spec.get(), i, &theta, nullptr, nullptr)) {
        std::cerr << "warning: too few scale pairs for a slope at theta=" << theta << "; reported as null\n";
        ++absent;
      }
    }
    j["absent"] = absent;
    if (!e.plot.empty()) {
      char* csv = nullptr;
      check(al_spectrum_to_csv(spec.get(), &csv));
      emit(take(csv), e.plot);
    }
    emit(j.dump(2), e.out);
    return kExitOk;
  } else {
    throw Failure{AL_ERR_INVALID_ARGUMENT, "InvalidArgument: unknown mode '" + e.mode + "'"};
  }
  json j = json::parse(take(s));
  emit(j.dump(2), e.out);
  return kExitOk;
}

// ---- map ----
int run_map(const InputArgs& in, const std::string& spec, const std::string& out) {
  auto ps = load(in.input, in.res);
  al_map* raw = nullptr;
  check(al_map_parse(spec.c_str(), &raw));
  Handle<al_map> f(raw);
  al_pointset* img = nullptr;
  check(al_map_apply(f.get(), ps.get(), &img));
  Handle<al_pointset> image(img);
  if (out.empty() || out == "-") {
    char* csv = nullptr;
    check(al_pointset_to_csv(image.get(), &csv));
    std::cout << take(csv);
  } else {
    check(al_pointset_write(image.get(), out.c_str()));
  }
  std::cerr << "dilatation bound " << al_map_dilatation(f.get()) << ", output resolution "
            << al_pointset_resolution(image.get()) << "\n";
  return kExitOk;
}

// ---- bounds ----
struct BoundsArgs {
  std::string kind = "spectrum";
  int n = 2;
  double k = 1.0, lambda = 1.0;
  std::optional<double> p, inner_p, k_inner, alpha, t, theta, d, a, b;
  std::optional<double> source_spiral, source_value;
  std::string source_file, out;
};

int run_bounds(const BoundsArgs& b) {
  json req = {{"kind", b.kind}, {"n", b.n}, {"K", b.k}, {"lambda", b.lambda}};
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) req[key] = *v;
  };
  put("p", b.p);
  put("inner_p", b.inner_p);
  put("k_inner", b.k_inner);
  put("alpha", b.alpha);
  put("t", b.t);
  put("theta", b.theta);
  put("d", b.d);
  put("a", b.a);
  put("b", b.b);
  if (b.source_spiral) {
    req["source"] = {{"kind", "spiral"}, {"a", *b.source_spiral}};
  } else if (b.source_value) {
    req["source"] = {{"kind", "constant"}, {"value", *b.source_value}};
  } else if (!b.source_file.empty()) {
    std::ifstream in(b.source_file);
    if (!in) throw Failure{AL_ERR_IO, "Io: cannot open '" + b.source_file + "'"};
    json spec;
    try {
      spec = json::parse(in);
    } catch (const json::exception& ex) {
      throw Failure{AL_ERR_PARSE, std::string("Parse: ") + ex.what()};
    }
    req["source"] = {{"kind", "spectrum"}, {"theta", spec["theta"]}, {"regularized", spec["regularized"]}};
  }
  char* s = nullptr;
  check(al_bounds_report_json(req.dump().c_str(), &s));
  emit(json::parse(take(s)).dump(2), b.out);
  return kExitOk;
}

// ---- verify ----
struct VerifyArgs {
  std::string set = "spiral:a=1";
  std::string map = "identity";
  std::optional<double> t, xmax;
  double eps = 0.2, res = 1e-4;
  double theta_lo = 0.05, theta_hi = 0.9, theta_step = 0.05;
  int centers = 256;
  std::string out;
};

double parse_set(const std::string& set) {
  const std::string prefix = "spiral:a=";
  if (set.rfind(prefix, 0) != 0) {
    throw Failure{AL_ERR_PARSE, "Parse: --set must look like spiral:a=<value>"};
  }
  try {
    std::size_t used = 0;
    const double a = std::stod(set.substr(prefix.size()), &used);
    if (used != set.size() - prefix.size()) throw std::invalid_argument("trailing text");
    return a;
  } catch (const std::exception&) {
    throw Failure{AL_ERR_PARSE, "Parse: bad spiral exponent in '" + set + "'"};
  }
}

int run_verify(const VerifyArgs& v) {
  json opts = {{"a", parse_set(v.set)},     {"map", v.map},           {"eps", v.eps},
               {"resolution", v.res},        {"theta_lo", v.theta_lo}, {"theta_hi", v.theta_hi},
               {"theta_step", v.theta_step}, {"center_budget", v.centers}};
  if (v.t) opts["t"] = *v.t;
  if (v.xmax) opts["xmax"] = *v.xmax;
  char* s = nullptr;
  int passed = 0;
  check(al_verify_run(opts.dump().c_str(), &s, &passed));
  json report = json::parse(take(s));
  emit(report.dump(2), v.out);
  std::size_t feasible = 0, failed = 0;
  for (const auto& row : report["rows"]) {
    if (!row["feasible"].get<bool>()) continue;
    ++feasible;
    if (!row["pass"].get<bool>()) ++failed;
  }
  std::cerr << (passed ? "PASS" : "FAIL") << ": " << feasible - failed << "/" << feasible
            << " feasible theta values within slack " << v.eps << "\n";
  return passed ? kExitOk : kExitVerifyFailed;
}

// ---- classify ----
int run_classify(double a, double b) {
  double k = 0.0;
  int via_inverse = 0;
  char* w = nullptr;
  check(al_classify_spirals(a, b, &k, &via_inverse, &w));
  std::cout << decimal(k) << ", witness " << take(w);
  if (via_inverse) std::cout << " (via inverse-map symmetry)";
  std::cout << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Assouad spectrum and quasiconformal distortion toolkit"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Sample an example family");
  gen->add_option("--family", gen_args.family, "spiral | logspiral | cantor | sequence");
  gen->add_option("--a", gen_args.a, "Polynomial spiral exponent");
  gen->add_option("--c", gen_args.c, "Logarithmic spiral rate");
  gen->add_option("--ratio", gen_args.ratio, "Cantor contraction ratio");
  gen->add_option("--depth", gen_args.depth, "Cantor depth");
  gen->add_option("--p", gen_args.p, "Sequence exponent");
  gen->add_option("--mmax", gen_args.mmax, "Sequence length");
  gen->add_option("--xmax", gen_args.xmax, "Spiral truncation (default: smallest accepted)");
  gen->add_option("--res", gen_args.res, "Target resolution");
  gen->add_option("--grade", gen_args.grade, "Stay dense after radial:K=<grade>");
  gen->add_option("-o,--out", gen_args.out, "Output file (.csv or .json; default stdout)");

  InputArgs stats_in;
  std::string stats_out;
  auto* stats = app.add_subcommand("index-stats", "Per-level occupancy of the dyadic index");
  stats->add_option("input", stats_in.input, "Point file")->required();
  stats->add_option("--res", stats_in.res, "Resolution when the file declares none");
  stats->add_option("--max-level", stats_in.max_level, "Deepest level (default: resolution-limited)");
  stats->add_option("-o,--out", stats_out, "Output file");

  EstimateArgs est_args;
  auto* est = app.add_subcommand("estimate", "Estimate dimensions of a point file");
  est->add_option("input", est_args.in.input, "Point file")->required();
  est->add_option("--res", est_args.in.res, "Resolution when the file declares none");
  est->add_option("--max-level", est_args.in.max_level, "Deepest index level");
  est->add_option("--mode", est_args.mode, "box | spectrum | assouad | qa");
  est->add_option("--theta", est_args.theta, "Explicit theta values (repeatable)");
  est->add_option("--theta-lo", est_args.theta_lo, "Grid start");
  est->add_option("--theta-hi", est_args.theta_hi, "Grid end");
  est->add_option("--theta-step", est_args.theta_step, "Grid step");
  est->add_option("--qa-theta", est_args.qa_theta, "Theta used for the quasi-Assouad value");
  est->add_option("--rmin", est_args.rmin, "Smallest scale");
  est->add_option("--rmax", est_args.rmax, "Largest scale");
  est->add_option("--centers", est_args.centers, "Center budget");
  est->add_option("--radius-scale", est_args.radius_scale, "Scale relaxation factor for r");
  est->add_option("--rho-eps", est_args.rho_eps, "Slack for the phase-transition estimate");
  est->add_option("-o,--out", est_args.out, "Output JSON file");
  est->add_option("--plot", est_args.plot, "Write theta,regularized CSV here");

  InputArgs map_in;
  std::string map_spec, map_out;
  auto* mapc = app.add_subcommand("map", "Apply a planar map to a point file");
  mapc->add_option("input", map_in.input, "Point file")->required();
  mapc->add_option("--res", map_in.res, "Resolution when the file declares none");
  mapc->add_option("--map", map_spec, "Map, e.g. radial:K=2|similarity:s=1+2i,t=0")->required();
  mapc->add_option("-o,--out", map_out, "Output file");

  BoundsArgs b;
  auto* bounds = app.add_subcommand("bounds", "Evaluate a distortion bound");
  bounds->add_option("--kind", b.kind,
                     "theta | beta | symmetric | spectrum | spectrum_lambda | assouad | "
                     "assouad_lambda | biholder | ours | compare | classify");
  bounds->add_option("--n", b.n, "Ambient dimension");
  bounds->add_option("--K", b.k, "Dilatation");
  bounds->add_option("--p", b.p, "Higher integrability exponent");
  bounds->add_option("--inner-p", b.inner_p, "Exponent for the inverse map");
  bounds->add_option("--k-inner", b.k_inner, "Inner dilatation (lambda forms)");
  bounds->add_option("--lambda", b.lambda, "Lambda constant");
  bounds->add_option("--alpha", b.alpha, "Source dimension");
  bounds->add_option("--t", b.t, "Spectrum parameter t (theta = 1/(1+t))");
  bounds->add_option("--theta", b.theta, "Theta");
  bounds->add_option("--d", b.d, "Source spectrum value");
  bounds->add_option("--a", b.a, "Spiral exponent a (classify)");
  bounds->add_option("--b", b.b, "Spiral exponent b (classify)");
  bounds->add_option("--source-spiral", b.source_spiral, "Use the closed-form spectrum of S_a");
  bounds->add_option("--source-value", b.source_value, "Use a constant source spectrum");
  bounds->add_option("--source-file", b.source_file, "Use a spectrum JSON from 'estimate'");
  bounds->add_option("-o,--out", b.out, "Output file");

  VerifyArgs v;
  auto* verify = app.add_subcommand("verify", "Check spectrum distortion bounds end to end");
  verify->add_option("--set", v.set, "Source set, spiral:a=<value>");
  verify->add_option("--map", v.map, "Planar map");
  verify->add_option("--t", v.t, "Check only theta(t)");
  verify->add_option("--eps", v.eps, "Slack");
  verify->add_option("--res", v.res, "Sampling resolution");
  verify->add_option("--xmax", v.xmax, "Spiral truncation");
  verify->add_option("--theta-lo", v.theta_lo, "Image grid start");
  verify->add_option("--theta-hi", v.theta_hi, "Image grid end");
  verify->add_option("--theta-step", v.theta_step, "Image grid step");
  verify->add_option("--centers", v.centers, "Center budget");
  verify->add_option("-o,--out", v.out, "Report file");

  double ca = 0.0, cb = 0.0;
  auto* classify = app.add_subcommand("classify", "Least dilatation taking S_a onto S_b");
  classify->add_option("--a", ca, "Source exponent")->required();
  classify->add_option("--b", cb, "Target exponent")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return run_gen(gen_args);
    if (stats->parsed()) return run_index_stats(stats_in, stats_out);
    if (est->parsed()) return run_estimate(est_args);
    if (mapc->parsed()) return run_map(map_in, map_spec, map_out);
    if (bounds->parsed()) return run_bounds(b);
    if (verify->parsed()) return run_verify(v);
    if (classify->parsed()) return run_classify(ca, cb);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return exit_code_for(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
