#include "pwvem/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pwvem/experiment.hpp"

namespace pwvem {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kExperimentNames[] = {
    {ExperimentKind::Table1, "table1"},   {ExperimentKind::VoronoiH, "voronoi_h"},
    {ExperimentKind::PConv, "pconv"},     {ExperimentKind::Pollution, "pollution"},
    {ExperimentKind::Singular, "singular"}, {ExperimentKind::Patch, "patch"},
    {ExperimentKind::InfSup, "infsup"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

double parse_real(const std::string& text) {
  // accepts plain reals and simple fractions such as 2/3
  const auto slash = text.find('/');
  if (slash != std::string::npos)
    return parse_real(trim(text.substr(0, slash))) / parse_real(trim(text.substr(slash + 1)));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw UsageError("not a number: '" + text + "'");
  return v;
}

long long parse_integer(const std::string& text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw UsageError("not an integer: '" + text + "'");
  return v;
}

void check_p(int p) {
  if (p < 3 || p % 2 == 0)
    throw UsageError("p must be odd, p = 2m+1 with m >= 1 (got p = " + std::to_string(p) + ")");
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kExperimentNames)
    if (k == kind) return name;
  return "?";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kExperimentNames)
    if (n == name) return k;
  std::string known;
  for (const auto& [k, n] : kExperimentNames) known += (known.empty() ? "" : ", ") + std::string(n);
  throw UsageError("unknown experiment '" + std::string(name) + "' (expected one of " + known + ")");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<int>(parse_integer(item)));
      continue;
    }
    // a..b runs over every second integer, matching odd p sequences
    const int a = static_cast<int>(parse_integer(trim(item.substr(0, dots))));
    const int b = static_cast<int>(parse_integer(trim(item.substr(dots + 2))));
    if (b < a) throw UsageError("empty range '" + item + "'");
    for (int v = a; v <= b; v += 2) out.push_back(v);
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
    out.push_back(parse_real(item));
  }
  return out;
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "missing key");
    if (value.empty()) throw ParseError(lineno, "missing value for '" + key + "'");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  try {
    return parse_key_values(in);
  } catch (const ParseError& e) {
    throw UsageError(path.string() + ":" + e.what());
  }
}

void apply(ExperimentConfig& c, const KeyValues& values) {
  for (const auto& [key, value] : values) {
    if (key == "experiment") {
      c.experiment = parse_experiment(value);
    } else if (key == "k") {
      c.k = parse_real(value);
    } else if (key == "p") {
      c.p_list = parse_int_list(value);
    } else if (key == "mesh") {
      c.mesh = value;
    } else if (key == "variant") {
      c.variants.clear();
      for (const auto& v : split(value, ',')) {
        try {
          c.variants.push_back(parse_variant(v));
        } catch (const std::exception& e) {
          throw UsageError(e.what());
        }
      }
    } else if (key == "xi") {
      c.xi_list = parse_real_list(value);
    } else if (key == "hk") {
      c.hk = parse_real(value);
    } else if (key == "lloyd") {
      c.lloyd = static_cast<int>(parse_integer(value));
    } else if (key == "out") {
      c.out = value;
    } else if (key == "offset") {
      c.offset = parse_real(value);
    } else if (key == "seed") {
      const long long s = parse_integer(value);
      if (s < 0) throw UsageError("seed must be non-negative");
      c.seed = static_cast<unsigned long long>(s);
    } else if (key == "evaluation") {
      if (value != "auto" && value != "projection" && value != "basis")
        throw UsageError("evaluation must be auto, projection or basis");
      c.evaluation = value;
    } else if (key == "cells") {
      c.cells = static_cast<int>(parse_integer(value));
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
}

ExperimentConfig resolve(ExperimentConfig c) {
  using V = Variant;
  struct Defaults {
    double k;
    std::vector<int> p;
    std::string mesh;
    std::vector<Variant> variants;
  };
  Defaults d;
  switch (c.experiment) {
    case ExperimentKind::Table1: d = {20.0, {13}, "structured:2,4,8,16", {V::PUM, V::GRAD, V::PWVEM}}; break;
    case ExperimentKind::VoronoiH: d = {20.0, {13}, "voronoi:8,16,32,64,128,256,512", {V::PWVEM}}; break;
    case ExperimentKind::PConv: d = {20.0, parse_int_list("3..17"), "structured:4", {V::PWVEM}}; break;
    case ExperimentKind::Pollution: d = {0.0, {9}, "voronoi:8,16,32,64,128,256,512", {V::PWVEM}}; break;
    case ExperimentKind::Singular: d = {10.0, parse_int_list("3..13"), "structured:4", {V::PWVEM}}; break;
    case ExperimentKind::Patch: d = {20.0, {13}, "structured:4;voronoi:16;chevron:4", {V::PWVEM}}; break;
    case ExperimentKind::InfSup: d = {20.0, {13}, "", {V::PWVEM}}; break;
  }
  if (c.experiment == ExperimentKind::Pollution) {
    if (c.k) throw UsageError("pollution derives k = hk / h from each mesh; set hk instead of k");
    if (!(c.hk > 0.0)) throw UsageError("hk must be positive");
  } else if (!c.k) {
    c.k = d.k;
  }
  if (c.k && !(*c.k > 0.0)) throw UsageError("k must be positive");
  if (c.p_list.empty()) c.p_list = d.p;
  for (int p : c.p_list) check_p(p);
  if (c.variants.empty()) c.variants = d.variants;
  if (c.mesh.empty()) c.mesh = d.mesh;
  if (c.experiment != ExperimentKind::InfSup) {
    if (c.mesh.empty()) throw UsageError("no mesh given");
    const auto items = parse_mesh_spec(c.mesh);
    for (V v : c.variants)
      if (v != V::PWVEM)
        for (const auto& item : items)
          if (item.family == MeshFamily::Voronoi || item.family == MeshFamily::Chevron)
            throw UsageError(std::string(to_string(v)) + " needs a triangular mesh, got '" +
                             c.mesh + "'");
  }
  if (c.experiment == ExperimentKind::Singular) {
    if (c.xi_list.empty()) c.xi_list = {1.0, 1.5, 2.0 / 3.0};
    for (double xi : c.xi_list)
      if (!(xi > 0.0 && xi <= 5.0)) throw UsageError("xi must lie in (0, 5]");
  }
  if (c.lloyd < 0) throw UsageError("lloyd must be >= 0");
  if (c.cells < 1) throw UsageError("cells must be >= 1");
  return c;
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  auto join = [](const auto& list) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t i = 0; i < list.size(); ++i) os << (i ? "," : "") << list[i];
    return os.str();
  };
  out << std::setprecision(17);
  out << "experiment = " << to_string(c.experiment) << '\n';
  if (c.k) out << "k = " << *c.k << '\n';
  out << "p = " << join(c.p_list) << '\n';
  if (!c.mesh.empty()) out << "mesh = " << c.mesh << '\n';
  std::vector<std::string> vs;
  for (auto v : c.variants) vs.emplace_back(to_string(v));
  out << "variant = " << join(vs) << '\n';
  if (!c.xi_list.empty()) out << "xi = " << join(c.xi_list) << '\n';
  if (c.experiment == ExperimentKind::Pollution) out << "hk = " << c.hk << '\n';
  out << "lloyd = " << c.lloyd << '\n';
  out << "out = " << c.out.string() << '\n';
  out << "offset = " << c.offset << '\n';
  out << "seed = " << c.seed << '\n';
  out << "evaluation = " << c.evaluation << '\n';
  if (c.experiment == ExperimentKind::InfSup) out << "cells = " << c.cells << '\n';
}

}  // namespace pwvem
