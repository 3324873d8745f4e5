#include "report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "families.hpp"
#include "planar_map.hpp"

namespace alab {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == line.npos ? line.npos : comma - start)));
    if (comma == line.npos) break;
    start = comma + 1;
  }
  return out;
}

double resolved_resolution(std::optional<double> from_file, std::optional<double> fallback) {
  if (fallback) return *fallback;
  if (from_file) return *from_file;
  fail(ErrorCode::Parse, "point file does not declare a resolution; supply one explicitly");
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string points_to_csv(const PointSet& points) {
  std::string out = "# resolution=" + fmt(points.resolution()) +
                    " stretch_grade=" + fmt(points.stretch_grade()) + "\n";
  for (int d = 0; d < points.dim(); ++d) out += (d ? ",x" : "x") + std::to_string(d);
  if (points.has_params()) out += ",param";
  out += "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points.point(i);
    for (int d = 0; d < points.dim(); ++d) {
      if (d) out += ",";
      out += fmt(p[d]);
    }
    if (points.has_params()) out += "," + fmt(points.params()[i]);
    out += "\n";
  }
  return out;
}

std::string points_to_json(const PointSet& points) {
  json j;
  j["dim"] = points.dim();
  j["resolution"] = points.resolution();
  j["stretch_grade"] = points.stretch_grade();
  json pts = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points.point(i);
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  }
  j["points"] = std::move(pts);
  if (points.has_params()) {
    json params = json::array();
    for (double v : points.params()) params.push_back(std::isnan(v) ? json(nullptr) : json(v));
    j["params"] = std::move(params);
  }
  return j.dump() + "\n";
}

PointSet parse_points_csv(const std::string& text, std::optional<double> resolution) {
  std::optional<double> file_res;
  double grade = 1.0;
  int columns = -1;
  bool has_param = false;
  std::vector<double> coords, params;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream words{std::string(line.substr(1))};
      std::string word;
      while (words >> word) {
        double v;
        if (word.rfind("resolution=", 0) == 0 && parse_double(std::string_view(word).substr(11), v)) file_res = v;
        if (word.rfind("stretch_grade=", 0) == 0 && parse_double(std::string_view(word).substr(14), v)) grade = v;
      }
      continue;
    }
    auto fields = split_fields(line);
    std::vector<double> vals(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) numeric = numeric && parse_double(fields[i], vals[i]);
    if (!numeric) {
      if (columns >= 0) fail(ErrorCode::Parse, "non-numeric value on line " + std::to_string(line_no));
      columns = static_cast<int>(fields.size());
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "param") {
          if (i + 1 != fields.size()) fail(ErrorCode::Parse, "the param column must come last");
          has_param = true;
        }
      }
      continue;
    }
    if (columns < 0) columns = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != columns) {
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                 " fields, expected " + std::to_string(columns));
    }
    const int dim = columns - (has_param ? 1 : 0);
    coords.insert(coords.end(), vals.begin(), vals.begin() + dim);
    if (has_param) params.push_back(vals.back());
  }
  const int dim = columns - (has_param ? 1 : 0);
  if (dim < 1) fail(ErrorCode::Parse, "no coordinate columns found");
  PointSet out(dim, resolved_resolution(file_res, resolution), std::move(coords), std::move(params));
  out.set_stretch_grade(grade);
  return out;
}

PointSet parse_points_json(const std::string& text, std::optional<double> resolution) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    std::optional<double> file_res;
    if (j.contains("resolution") && !j["resolution"].is_null()) file_res = j["resolution"].get<double>();
    std::vector<double> coords;
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || static_cast<int>(p.size()) != dim) {
        fail(ErrorCode::Parse, "every point needs exactly dim coordinates");
      }
      for (const auto& c : p) coords.push_back(c.get<double>());
    }
    std::vector<double> params;
    if (j.contains("params")) {
      for (const auto& v : j["params"]) params.push_back(v.is_null() ? std::nan("") : v.get<double>());
    }
    PointSet out(dim, resolved_resolution(file_res, resolution), std::move(coords), std::move(params));
    if (j.contains("stretch_grade")) out.set_stretch_grade(j["stretch_grade"].get<double>());
    return out;
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, e.what());
  }
}

PointSet parse_points(const std::string& text, std::optional<double> resolution) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '{') return parse_points_json(text, resolution);
  return parse_points_csv(text, resolution);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

PointSet read_points(const std::string& path, std::optional<double> resolution) {
  return parse_points(read_text_file(path), resolution);
}

void write_points(const PointSet& points, const std::string& path) {
  const bool as_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  write_text_file(path, as_json ? points_to_json(points) : points_to_csv(points));
}

json index_stats_json(const MultiScaleIndex& idx) {
  json levels = json::array();
  for (int m = 0; m <= idx.max_level(); ++m) {
    levels.push_back({{"level", m}, {"side", idx.cell_side(m)}, {"occupied", idx.occupied_count(m)}});
  }
  return {{"schema", kSchema},
          {"dim", idx.dim()},
          {"points", idx.point_count()},
          {"resolution", idx.resolution()},
          {"max_level", idx.max_level()},
          {"root", {{"center", idx.root().center}, {"radius", idx.root().radius}}},
          {"levels", std::move(levels)}};
}

json window_json(const ScaleWindow& w) { return {{"r_min", w.r_min}, {"r_max", w.r_max}}; }

json dim_estimate_json(const DimEstimate& est) {
  json diag = json::array();
  for (const auto& p : est.slope_diagnostics) diag.push_back({p.log_scale, p.log_count});
  return {{"schema", kSchema},
          {"method", dim_method_name(est.method)},
          {"value", est.value},
          {"percentile95", opt_json(est.percentile_value)},
          {"theta", opt_json(est.theta)},
          {"window", window_json(est.window)},
          {"slope_diagnostics", std::move(diag)}};
}

json spectrum_json(const SpectrumEstimate& spec) {
  json values = json::array(), reg = json::array(), pct = json::array(), diag = json::array();
  for (std::size_t i = 0; i < spec.theta.size(); ++i) {
    values.push_back(opt_json(spec.values[i]));
    reg.push_back(opt_json(spec.regularized[i]));
    pct.push_back(opt_json(spec.percentile[i]));
    if (const auto& d = spec.diagnostics[i]) {
      diag.push_back({{"R", d->big_radius},
                      {"r", d->small_radius},
                      {"center", d->center},
                      {"count", d->count},
                      {"pairs", d->pairs}});
    } else {
      diag.push_back(nullptr);
    }
  }
  return {{"schema", kSchema},
          {"theta", spec.theta},
          {"value", std::move(values)},
          {"regularized", std::move(reg)},
          {"percentile95", std::move(pct)},
          {"diagnostics", std::move(diag)},
          {"window", window_json(spec.window)},
          {"ambient_dim", spec.ambient_dim},
          {"center_budget", spec.center_budget},
          {"radius_scale", spec.radius_scale}};
}

std::string spectrum_csv(const SpectrumEstimate& spec) {
  std::string out = "theta,regularized\n";
  for (std::size_t i = 0; i < spec.theta.size(); ++i) {
    out += fmt(spec.theta[i]) + "," + (spec.regularized[i] ? fmt(*spec.regularized[i]) : "") + "\n";
  }
  return out;
}

SpectrumFn interpolated_spectrum(const SpectrumEstimate& spec) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < spec.theta.size(); ++i) {
    if (spec.regularized[i]) pts.emplace_back(spec.theta[i], *spec.regularized[i]);
  }
  return [pts = std::move(pts)](double theta) -> std::optional<double> {
    if (pts.empty() || theta < pts.front().first - 1e-12 || theta > pts.back().first + 1e-12) {
      return std::nullopt;
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (theta <= pts[i + 1].first) {
        const auto [x0, y0] = pts[i];
        const auto [x1, y1] = pts[i + 1];
        if (theta <= x0) return y0;
        return y0 + (y1 - y0) * (theta - x0) / (x1 - x0);
      }
    }
    return pts.back().second;
  };
}

std::optional<double> image_spiral_exponent(double a, const std::string& map_spec) {
  const PlanarMap f = parse_map(map_spec);
  double b = a;
  bool moved_origin = false;
  for (const auto& op : f.ops()) {
    if (const auto* r = std::get_if<RadialStretch>(&op)) {
      if (moved_origin) return std::nullopt;
      b *= r->exponent;
    } else if (const auto* s = std::get_if<Similarity>(&op)) {
      if (s->offset != Complex{}) moved_origin = true;
    } else {
      moved_origin = true;
    }
  }
  return b;
}

VerifyReport run_verify(const VerifyOptions& options, const std::optional<SpectrumFn>& image_oracle) {
  if (!(options.epsilon > 0.0)) fail(ErrorCode::InvalidParameter, "epsilon must be positive");
  VerifyReport rep;
  rep.options = options;
  const PlanarMap f = parse_map(options.map_spec);
  rep.dilatation = f.dilatation_bound();

  double grade = 1.0;
  if (f.ops().size() == 1) {
    if (const auto* r = std::get_if<RadialStretch>(&f.ops()[0]); r && r->exponent < 1.0) grade = 1.0 / r->exponent;
  }

  auto t0 = std::chrono::steady_clock::now();
  rep.xmax = options.xmax ? *options.xmax
                          : spiral_min_xmax(FamilyKind::PolySpiral, options.a, options.resolution, grade);
  FamilySpec spec;
  spec.kind = FamilyKind::PolySpiral;
  spec.parameter = options.a;
  spec.truncation = rep.xmax;
  spec.target_resolution = options.resolution;
  spec.stretch_grade = grade;
  const PointSet source = sample_family(spec);
  const PointSet image = apply_map(f, source);
  rep.source_points = source.size();
  rep.image_points = image.size();
  rep.image_resolution = image.resolution();
  rep.seconds_sample = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto idx_s = MultiScaleIndex::build(source, MultiScaleIndex::max_level_for(source));
  const auto idx_i = MultiScaleIndex::build(image, MultiScaleIndex::max_level_for(image));
  const auto source_grid = theta_grid(options.source_step, 1.0 - options.source_step, options.source_step);
  const std::vector<double> image_grid =
      options.t ? std::vector<double>{theta_of_t(*options.t)}
                : theta_grid(options.theta_lo, options.theta_hi, options.theta_step);
  rep.source = estimate_spectrum(idx_s, source_grid, default_window(idx_s), options.estimator);
  rep.image = estimate_spectrum(idx_i, image_grid, default_window(idx_i), options.estimator);
  rep.seconds_estimate = seconds_since(t0);

  const SpectrumFn source_fn = interpolated_spectrum(rep.source);
  std::optional<SpectrumFn> oracle = image_oracle;
  if (!oracle) {
    if (auto b = image_spiral_exponent(options.a, options.map_spec)) {
      oracle = [b = *b](double theta) -> std::optional<double> { return oracle_spiral_spectrum(b, theta); };
    }
  }
  rep.oracle_available = oracle.has_value();
  rep.oracle_binding = image_oracle.has_value();

  ExponentContext ctx;
  ctx.n = 2;
  ctx.k = rep.dilatation;
  const double eps = options.epsilon;
  bool any_feasible = false, all_pass = true;
  for (std::size_t i = 0; i < image_grid.size(); ++i) {
    VerifyRow row;
    row.theta = image_grid[i];
    row.t = 1.0 / row.theta - 1.0;
    row.image = rep.image.regularized[i];
    row.source_upper_arg = source_fn(theta_of_t(row.t / ctx.k));
    row.source_lower_arg = source_fn(theta_of_t(row.t * ctx.k));
    if (!row.image) {
      row.reason = "image spectrum absent at this theta";
    } else if (!row.source_upper_arg || !row.source_lower_arg) {
      row.reason = "source spectrum unavailable at theta(t/K) or theta(Kt)";
    } else {
      row.feasible = true;
      const BoundPair b = spectrum_bounds(row.t, ctx, source_fn);
      row.lower = b.lower;
      row.upper = b.upper;
      double slack = std::min(*row.image - (b.lower - eps), (b.upper + eps) - *row.image);
      if (ctx.k > 1.0 && row.theta < 1.0 / (ctx.k * ctx.k)) {
        if (auto s = source_fn(row.theta / (ctx.k * ctx.k))) {
          row.biholder = biholder_upper(row.theta, ctx.k, *s);
          slack = std::min(slack, (*row.biholder + eps) - *row.image);
        }
      }
      if (oracle) {
        row.oracle = (*oracle)(row.theta);
        if (row.oracle) {
          const double margin = eps - std::abs(*row.image - *row.oracle);
          row.oracle_agrees = margin >= 0.0;
          if (rep.oracle_binding) slack = std::min(slack, margin);
        }
      }
      row.slack = slack;
      row.passed = slack >= 0.0;
      any_feasible = true;
      all_pass = all_pass && row.passed;
    }
    rep.rows.push_back(std::move(row));
  }
  rep.passed = any_feasible && all_pass;
  return rep;
}

json VerifyReport::to_json() const {
  json rows_j = json::array();
  for (const auto& r : rows) {
    rows_j.push_back({{"theta", r.theta},
                      {"t", r.t},
                      {"feasible", r.feasible},
                      {"reason", r.reason},
                      {"source_at_theta_t_over_K", opt_json(r.source_upper_arg)},
                      {"source_at_theta_Kt", opt_json(r.source_lower_arg)},
                      {"lower", opt_json(r.lower)},
                      {"upper", opt_json(r.upper)},
                      {"biholder_upper", opt_json(r.biholder)},
                      {"image", opt_json(r.image)},
                      {"oracle", opt_json(r.oracle)},
                      {"oracle_agrees", r.oracle_agrees ? json(*r.oracle_agrees) : json(nullptr)},
                      {"slack", r.feasible ? json(r.slack) : json(nullptr)},
                      {"pass", r.feasible ? json(r.passed) : json(nullptr)}});
  }
  json scenario = {{"family", "spiral"},
                   {"a", options.a},
                   {"map", options.map_spec},
                   {"K", dilatation},
                   {"t", opt_json(options.t)},
                   {"epsilon", options.epsilon},
                   {"resolution", options.resolution},
                   {"xmax", xmax},
                   {"theta_grid", {{"lo", options.theta_lo}, {"hi", options.theta_hi}, {"step", options.theta_step}}},
                   {"source_theta_step", options.source_step},
                   {"center_budget", options.estimator.center_budget},
                   {"radius_scale", options.estimator.radius_scale}};
  return {{"schema", kSchema},
          {"scenario", std::move(scenario)},
          {"source_points", source_points},
          {"image_points", image_points},
          {"image_resolution", image_resolution},
          {"oracle_available", oracle_available},
          {"oracle_binding", oracle_binding},
          {"source_spectrum", spectrum_json(source)},
          {"image_spectrum", spectrum_json(image)},
          {"rows", std::move(rows_j)},
          {"timings", {{"sample_s", seconds_sample}, {"estimate_s", seconds_estimate}}},
          {"passed", passed}};
}

}  // namespace alab

namespace alab {

namespace {

std::optional<double> opt_number(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_number()) fail(ErrorCode::Parse, std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

double need_number(const json& j, const char* key) {
  auto v = opt_number(j, key);
  if (!v) fail(ErrorCode::InvalidParameter, std::string("missing '") + key + "'");
  return *v;
}

SpectrumFn source_from_json(const json& src, std::string& description) {
  const std::string kind = src.value("kind", "");
  if (kind == "spiral") {
    const double a = need_number(src, "a");
    oracle_spiral_rho(a);  // validates a
    description = "closed-form spectrum of the polynomial spiral S_a";
    return [a](double theta) -> std::optional<double> { return oracle_spiral_spectrum(a, theta); };
  }
  if (kind == "constant") {
    const double v = need_number(src, "value");
    description = "constant source spectrum";
    return [v](double) -> std::optional<double> { return v; };
  }
  if (kind == "spectrum") {
    SpectrumEstimate est;
    est.theta = src.at("theta").get<std::vector<double>>();
    for (const auto& v : src.at("regularized")) {
      est.regularized.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    }
    if (est.regularized.size() != est.theta.size()) fail(ErrorCode::Parse, "theta/regularized length mismatch");
    description = "estimated spectrum, linearly interpolated between grid values";
    return interpolated_spectrum(est);
  }
  fail(ErrorCode::InvalidParameter, "source.kind must be spiral, constant or spectrum");
}

}  // namespace

json bounds_report(const json& request) {
  try {
    const std::string kind = request.value("kind", "");
    ExponentContext ctx;
    ctx.n = request.value("n", 2);
    ctx.k = request.value("K", 1.0);
    ctx.p = opt_number(request, "p");
    ctx.lambda = request.value("lambda", 1.0);
    const auto inner_p = opt_number(request, "inner_p");
    const auto k_inner = opt_number(request, "k_inner");

    json out = {{"schema", kSchema}, {"kind", kind}, {"inputs", request}};
    json assumptions = json::array();
    auto note_context = [&] {
      validate_context(ctx);
      if (!ctx.p) {
        if (ctx.k == 1.0) {
          assumptions.push_back("K = 1: p taken as +infinity, bounds reduce to the identity");
        } else if (ctx.n == 2) {
          assumptions.push_back("planar exponent p = 2K/(K-1)");
        }
      }
      if (ctx.n >= 3 && !inner_p) {
        assumptions.push_back("inverse-map exponent replaced by the lambda-form bound n*lambda*K^(n-1)/(lambda*K^(n-1)-1)");
      }
    };

    if (kind == "theta") {
      const double t = need_number(request, "t");
      out["formula"] = "theta(t) = 1/(1+t)";
      out["values"] = {{"theta", theta_of_t(t)}};
    } else if (kind == "beta") {
      note_context();
      const double alpha = need_number(request, "alpha");
      out["formula"] = "upper = p*alpha/(p-n+alpha); lower = (p'-n)*alpha/(p'-alpha)";
      out["values"] = {{"upper", beta_upper(alpha, ctx)}, {"lower", beta_lower(alpha, ctx, inner_p)}};
    } else if (kind == "symmetric") {
      note_context();
      out["formula"] = "1 - n/p";
      out["values"] = {{"coefficient", symmetric_coeff(ctx)}, {"p", resolve_p(ctx)}};
    } else if (kind == "assouad" || kind == "assouad_lambda") {
      note_context();
      const double alpha = need_number(request, "alpha");
      BoundPair b;
      if (kind == "assouad") {
        out["formula"] = "(1-n/p)(1/alpha-1/n) <= 1/D-1/n <= (1-n/p')^-1 (1/alpha-1/n)";
        b = assouad_bounds(alpha, ctx, inner_p);
      } else {
        out["formula"] = "(lambda*K)^-1 (1/alpha-1/n) <= 1/D-1/n <= lambda*K_I (1/alpha-1/n)";
        b = assouad_bounds_lambda(alpha, ctx, k_inner);
      }
      out["values"] = {{"lower", b.lower}, {"upper", b.upper}};
      assumptions.push_back("bounds are stated for the image dimension D, not for 1/D");
    } else if (kind == "spectrum" || kind == "spectrum_lambda") {
      note_context();
      const double t = need_number(request, "t");
      std::string desc;
      const SpectrumFn source = source_from_json(request.at("source"), desc);
      assumptions.push_back(desc);
      BoundPair b;
      if (kind == "spectrum") {
        out["formula"] =
            "(1-n/p)(1/d(theta(t/K))-1/n) <= 1/D(theta(t))-1/n <= (1-n/p')^-1 (1/d(theta(Kt))-1/n)";
        b = spectrum_bounds(t, ctx, source, inner_p);
      } else {
        out["formula"] =
            "(lambda*K)^-1 (1/d(theta(t/K))-1/n) <= 1/D(theta(t))-1/n <= lambda*K_I (1/d(theta(Kt))-1/n)";
        b = spectrum_bounds_lambda(t, ctx, source, k_inner);
      }
      assumptions.push_back("a source value of 0 forces an image bound of 0 (1/0 = infinity)");
      out["values"] = {{"theta", theta_of_t(t)},
                       {"theta_t_over_K", theta_of_t(t / ctx.k)},
                       {"theta_Kt", theta_of_t(ctx.k * t)},
                       {"source_at_theta_t_over_K", *source(theta_of_t(t / ctx.k))},
                       {"source_at_theta_Kt", *source(theta_of_t(ctx.k * t))},
                       {"lower", b.lower},
                       {"upper", b.upper}};
    } else if (kind == "biholder") {
      const double theta = need_number(request, "theta");
      double d;
      if (request.contains("source")) {
        std::string desc;
        auto v = source_from_json(request["source"], desc)(theta / (ctx.k * ctx.k));
        if (!v) fail(ErrorCode::SpectrumUndefined, "source spectrum unavailable at theta/K^2");
        d = *v;
        assumptions.push_back(desc);
      } else {
        d = need_number(request, "d");
      }
      out["formula"] = "K (1 - theta/K^2)/(1 - theta) * d(theta/K^2), capped at n";
      out["values"] = {{"upper", biholder_upper(theta, ctx.k, d, ctx.n)}, {"source_at_theta_over_K2", d}};
      assumptions.push_back("requires theta < 1/K^2");
    } else if (kind == "ours") {
      const double t = need_number(request, "t");
      double d;
      if (request.contains("source")) {
        std::string desc;
        auto v = source_from_json(request["source"], desc)(theta_of_t(t / ctx.k));
        if (!v) fail(ErrorCode::SpectrumUndefined, "source spectrum unavailable at theta(t/K)");
        d = *v;
        assumptions.push_back(desc);
      } else {
        d = need_number(request, "d");
      }
      out["formula"] = "K d / (1 + (K-1) d / 2), d = source value at theta(t/K)";
      out["values"] = {{"upper", ours_upper(t, ctx.k, d)}, {"d", d}};
      assumptions.push_back("planar maps only");
    } else if (kind == "compare") {
      const double t = need_number(request, "t");
      std::string desc;
      const auto c = compare_bounds(t, ctx.k, source_from_json(request.at("source"), desc));
      assumptions.push_back(desc);
      out["formula"] = "compare K d/(1+(K-1)d/2) with K(1-theta/K^2)/(1-theta) d(theta/K^2)";
      out["values"] = {{"theta", c.theta},
                       {"d", c.d},
                       {"ours", c.ours},
                       {"biholder", opt_json(c.biholder)},
                       {"theta_below_inverse_K2", c.theta_below_inverse_k2},
                       {"theta_below_half_d", c.theta_below_half_d},
                       {"hypotheses_hold", c.hypotheses_hold},
                       {"ours_not_worse", c.biholder ? json(c.ours_not_worse) : json(nullptr)},
                       {"note", c.note}};
    } else if (kind == "classify") {
      const auto c = classify_spirals(need_number(request, "a"), need_number(request, "b"));
      out["formula"] = "K = max(a,b)/min(a,b)";
      out["values"] = {{"dilatation", c.dilatation}, {"witness", c.witness}, {"via_inverse", c.via_inverse}};
      if (c.via_inverse) assumptions.push_back("a < b handled via inverse-map symmetry");
    } else {
      fail(ErrorCode::InvalidParameter, "unknown bounds kind '" + kind + "'");
    }
    out["assumptions"] = std::move(assumptions);
    return out;
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, e.what());
  }
}

}  // namespace alab
