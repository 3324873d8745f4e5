#include "planar_map.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "errors.hpp"

namespace alab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text) {
  text = trim(text);
  if (text.empty()) fail(ErrorCode::Parse, "empty number");
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    fail(ErrorCode::Parse, "bad number '" + std::string(text) + "'");
  }
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) fail(ErrorCode::Parse, "empty complex number");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  s.pop_back();
  // split at the last sign that is not an exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re), parse_real(im)};
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return fmt(z.real());
  std::string im = fmt(z.imag());
  if (z.real() == 0.0) return im + "i";
  return fmt(z.real()) + (z.imag() < 0.0 ? "" : "+") + im + "i";
}

double primitive_dilatation(const Primitive& p) {
  if (const auto* r = std::get_if<RadialStretch>(&p)) {
    return std::max(r->exponent, 1.0 / r->exponent);
  }
  return 1.0;
}

Complex apply_primitive(const Primitive& p, Complex z) {
  return std::visit(
      Overloaded{
          [&](const RadialStretch& r) -> Complex {
            const double m = std::abs(z);
            if (m == 0.0) return {0.0, 0.0};
            return z * std::pow(m, r.exponent - 1.0);
          },
          [&](const Similarity& s) -> Complex { return s.scale * z + s.offset; },
          [&](const Mobius& m) -> Complex { return (m.a * z + m.b) / (m.c * z + m.d); },
      },
      p);
}

PlanarMap::PlanarMap(std::vector<Primitive> ops) : ops_(std::move(ops)) {
  for (const auto& p : ops_) bound_ *= primitive_dilatation(p);
}

Complex PlanarMap::operator()(Complex z) const {
  for (const auto& p : ops_) z = apply_primitive(p, z);
  return z;
}

PlanarMap PlanarMap::inverse() const {
  std::vector<Primitive> inv;
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    inv.push_back(std::visit(
        Overloaded{
            [](const RadialStretch& r) -> Primitive { return RadialStretch{1.0 / r.exponent}; },
            [](const Similarity& s) -> Primitive {
              return Similarity{1.0 / s.scale, -s.offset / s.scale};
            },
            [](const Mobius& m) -> Primitive { return Mobius{m.d, -m.b, -m.c, m.a}; },
        },
        *it));
  }
  return PlanarMap(std::move(inv));
}

std::string PlanarMap::to_string() const {
  if (ops_.empty()) return "identity";
  std::string out;
  for (const auto& p : ops_) {
    if (!out.empty()) out += "|";
    out += std::visit(
        Overloaded{
            [](const RadialStretch& r) {
              return r.exponent <= 1.0 ? "radial:K=" + fmt(1.0 / r.exponent)
                                       : "radialinv:K=" + fmt(r.exponent);
            },
            [](const Similarity& s) {
              return "similarity:s=" + format_complex(s.scale) + ",t=" + format_complex(s.offset);
            },
            [](const Mobius& m) {
              return "mobius:a=" + format_complex(m.a) + ",b=" + format_complex(m.b) +
                     ",c=" + format_complex(m.c) + ",d=" + format_complex(m.d);
            },
        },
        p);
  }
  return out;
}

PlanarMap identity_map() { return PlanarMap(); }

PlanarMap radial_stretch(double k) {
  if (!(k >= 1.0) || !std::isfinite(k)) fail(ErrorCode::InvalidDilatation, "radial stretch needs K >= 1");
  if (k == 1.0) return identity_map();
  return PlanarMap({RadialStretch{1.0 / k}});
}

PlanarMap inverse_radial_stretch(double k) {
  if (!(k >= 1.0) || !std::isfinite(k)) fail(ErrorCode::InvalidDilatation, "radial stretch needs K >= 1");
  if (k == 1.0) return identity_map();
  return PlanarMap({RadialStretch{k}});
}

PlanarMap similarity(Complex scale, Complex offset) {
  if (scale == Complex{0.0, 0.0}) fail(ErrorCode::InvalidParameter, "similarity scale must be nonzero");
  return PlanarMap({Similarity{scale, offset}});
}

PlanarMap mobius(Complex a, Complex b, Complex c, Complex d) {
  if (std::abs(a * d - b * c) == 0.0) fail(ErrorCode::InvalidParameter, "Mobius map needs ad - bc != 0");
  return PlanarMap({Mobius{a, b, c, d}});
}

PlanarMap compose(const PlanarMap& first, const PlanarMap& second) {
  std::vector<Primitive> ops = first.ops();
  ops.insert(ops.end(), second.ops().begin(), second.ops().end());
  return PlanarMap(std::move(ops));
}

PlanarMap parse_map(std::string_view spec) {
  PlanarMap out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t bar = spec.find('|', start);
    std::string_view part = trim(spec.substr(start, bar == std::string_view::npos ? spec.npos : bar - start));
    if (part.empty()) fail(ErrorCode::Parse, "empty map component in '" + std::string(spec) + "'");
    std::string_view name = part, args;
    if (auto colon = part.find(':'); colon != part.npos) {
      name = trim(part.substr(0, colon));
      args = part.substr(colon + 1);
    }
    std::map<std::string, std::string, std::less<>> kv;
    for (std::size_t p = 0; p < args.size();) {
      std::size_t comma = args.find(',', p);
      std::string_view item = trim(args.substr(p, comma == args.npos ? args.npos : comma - p));
      auto eq = item.find('=');
      if (eq == item.npos) fail(ErrorCode::Parse, "expected key=value in '" + std::string(item) + "'");
      kv[std::string(trim(item.substr(0, eq)))] = std::string(trim(item.substr(eq + 1)));
      if (comma == args.npos) break;
      p = comma + 1;
    }
    auto need = [&](const char* key) -> const std::string& {
      auto it = kv.find(key);
      if (it == kv.end()) fail(ErrorCode::Parse, std::string("missing '") + key + "' in '" + std::string(part) + "'");
      return it->second;
    };
    PlanarMap piece;
    if (name == "identity") {
      piece = identity_map();
    } else if (name == "radial") {
      piece = radial_stretch(parse_real(need("K")));
    } else if (name == "radialinv") {
      piece = inverse_radial_stretch(parse_real(need("K")));
    } else if (name == "similarity") {
      piece = similarity(parse_complex(need("s")), kv.count("t") ? parse_complex(kv["t"]) : Complex{});
    } else if (name == "mobius") {
      piece = mobius(parse_complex(need("a")), parse_complex(need("b")), parse_complex(need("c")),
                     parse_complex(need("d")));
    } else {
      fail(ErrorCode::Parse, "unknown map '" + std::string(name) + "'");
    }
    out = compose(out, piece);
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

namespace {

/// Worst image radius of a resolution/2 disk around any sample point.
double propagate(const Primitive& p, std::span<const Complex> pts, double res) {
  const double h = 0.5 * res;
  double worst = 0.0;
  std::visit(
      Overloaded{
          [&](const RadialStretch& r) {
            const double e = r.exponent;
            for (Complex z : pts) {
              const double m = std::abs(z);
              double w;
              if (e <= 1.0) {
                w = m >= res ? h * std::pow(m - h, e - 1.0) : std::pow(m + h, e) + std::pow(m, e);
              } else {
                w = h * e * std::pow(m + h, e - 1.0);
              }
              worst = std::max(worst, w);
            }
          },
          [&](const Similarity& s) { worst = h * std::abs(s.scale); },
          [&](const Mobius& mob) {
            const double det = std::abs(mob.a * mob.d - mob.b * mob.c);
            for (Complex z : pts) {
              const double lower = std::abs(mob.c) == 0.0
                                       ? std::abs(mob.d)
                                       : std::abs(mob.c) * (std::abs(z + mob.d / mob.c) - h);
              worst = std::max(worst, h * det / (lower * lower));
            }
          },
      },
      p);
  return 2.0 * worst;
}

}  // namespace

PointSet apply_map(const PlanarMap& f, const PointSet& points) {
  if (points.dim() != 2) fail(ErrorCode::DimensionMismatch, "planar maps need 2-dimensional points");
  std::vector<Complex> pts(points.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {points.point(i)[0], points.point(i)[1]};

  double res = points.resolution();
  const bool graded_stretch =
      f.ops().size() == 1 && std::holds_alternative<RadialStretch>(f.ops()[0]) &&
      std::abs(std::get<RadialStretch>(f.ops()[0]).exponent * points.stretch_grade() - 1.0) < 1e-12;

  for (const auto& op : f.ops()) {
    if (const auto* m = std::get_if<Mobius>(&op); m && std::abs(m->c) != 0.0) {
      const Complex pole = -m->d / m->c;
      for (Complex z : pts) {
        if (std::abs(z - pole) < 10.0 * res) {
          fail(ErrorCode::PoleProximity, "a sample point lies within 10 resolutions of the Mobius pole");
        }
      }
    }
    if (!graded_stretch) res = propagate(op, pts, res);
    for (auto& z : pts) z = apply_primitive(op, z);
  }

  std::vector<double> coords(2 * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    coords[2 * i] = pts[i].real();
    coords[2 * i + 1] = pts[i].imag();
  }
  return PointSet(2, res, std::move(coords),
                  std::vector<double>(points.params().begin(), points.params().end()));
}

BiHolderExponents bi_holder_exponents(const PlanarMap& f) {
  const double k = f.dilatation_bound();
  return {1.0 / k, k, "local exponents; the constant depends on the map and the compact set"};
}

}  // namespace alab
