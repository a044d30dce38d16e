#include "pwvem/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace pwvem {

namespace {

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
  }
  return out;
}

Evaluation evaluation_of(const ExperimentConfig& c) {
  if (c.evaluation == "projection") return Evaluation::Projection;
  if (c.evaluation == "basis") return Evaluation::ExactBasis;
  return Evaluation::Automatic;
}

struct Series {
  std::string name;
  std::vector<CsvRow> rows;
};

struct Job {
  const PolygonalMesh* mesh;
  std::string mesh_spec;
  double k;
  int p;
  Variant variant;
};

// one mesh/solve/error pipeline with the failing parameters attached
ErrorReport solve_and_measure(const Job& job, const ExperimentConfig& config,
                              const std::function<ExactSolution(const WaveContext&)>& make_exact) {
  try {
    WaveContext ctx(job.k, equispaced_directions(job.p, config.offset));
    const ExactSolution exact = make_exact(ctx);
    GlobalSystem sys = assemble(*job.mesh, ctx, job.variant);
    sys.rhs = assemble_rhs(*job.mesh, ctx, impedance_datum(exact, job.k));
    const DiscreteSolution sol = solve(*job.mesh, ctx, sys);
    return l2_relative_error(*job.mesh, ctx, sol, exact, evaluation_of(config));
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << e.what() << " [mesh " << job.mesh_spec << ", h = " << job.mesh->mesh_size()
       << ", k = " << job.k << ", p = " << job.p << ", variant " << to_string(job.variant) << "]";
    throw std::runtime_error(os.str());
  }
}

struct BuiltMesh {
  std::string spec;
  PolygonalMesh mesh;
};

std::vector<BuiltMesh> build_all(const ExperimentConfig& c) {
  std::vector<BuiltMesh> out;
  for (const auto& item : parse_mesh_spec(c.mesh))
    out.push_back({describe(item, c.seed, c.lloyd), build_mesh(item, c.seed, c.lloyd)});
  return out;
}

// attach rates to consecutive rows of one series; h must shrink
void add_rates(Series& s, ExperimentResult& result) {
  std::vector<ErrorReport> reports;
  for (const auto& r : s.rows) reports.push_back(r.report);
  if (reports.size() < 2) return;
  try {
    reports = rate_table(reports);
    for (std::size_t i = 0; i < reports.size(); ++i) s.rows[i].report.rate = reports[i].rate;
  } catch (const InvalidArgument& e) {
    result.notes.push_back(s.name + ": no rates (" + e.what() + ")");
  }
}

ExactSolution hankel_for(const WaveContext& ctx) { return ExactSolution::hankel(ctx.k); }

void run_h_series(const ExperimentConfig& c, ExperimentResult& result, const std::string& tag) {
  const auto meshes = build_all(c);
  for (Variant v : c.variants)
    for (int p : c.p_list) {
      Series s{std::string(to_string(v)) + " p=" + std::to_string(p), {}};
      for (const auto& m : meshes) {
        const Job job{&m.mesh, m.spec, *c.k, p, v};
        s.rows.push_back({tag, solve_and_measure(job, c, hankel_for), c.offset, m.spec});
      }
      add_rates(s, result);
      PlotSeries plot{s.name + " (h, error)", {}};
      for (const auto& r : s.rows) plot.points.emplace_back(r.report.h, r.report.l2_rel_error);
      result.plots.push_back(std::move(plot));
      for (auto& r : s.rows) result.rows.push_back(std::move(r));
    }
}

void run_pconv(const ExperimentConfig& c, ExperimentResult& result) {
  for (const auto& m : build_all(c))
    for (Variant v : c.variants) {
      PlotSeries plot{std::string(to_string(v)) + " " + m.spec + " (p, error)", {}};
      for (int p : c.p_list) {
        const Job job{&m.mesh, m.spec, *c.k, p, v};
        CsvRow row{"pconv", solve_and_measure(job, c, hankel_for), c.offset, m.spec};
        plot.points.emplace_back(p, row.report.l2_rel_error);
        result.rows.push_back(std::move(row));
      }
      result.plots.push_back(std::move(plot));
    }
}

void run_pollution(const ExperimentConfig& c, ExperimentResult& result) {
  const auto meshes = build_all(c);
  for (int p : c.p_list) {
    PlotSeries plot{"PWVEM p=" + std::to_string(p) + " hk=" + fmt(c.hk) + " (1/h, error)", {}};
    for (const auto& m : meshes) {
      const double k = c.hk / m.mesh.mesh_size();
      for (Variant v : c.variants) {
        const Job job{&m.mesh, m.spec, k, p, v};
        CsvRow row{"pollution", solve_and_measure(job, c, hankel_for), c.offset, m.spec};
        plot.points.emplace_back(1.0 / row.report.h, row.report.l2_rel_error);
        result.rows.push_back(std::move(row));
      }
    }
    result.plots.push_back(std::move(plot));
  }
}

void run_singular(const ExperimentConfig& c, ExperimentResult& result) {
  const auto meshes = build_all(c);
  for (double xi : c.xi_list) {
    const std::string tag = "singular:xi=" + fmt(xi, 10);
    auto make = [xi](const WaveContext& ctx) { return ExactSolution::bessel_singular(ctx.k, xi); };
    for (const auto& m : meshes)
      for (Variant v : c.variants) {
        PlotSeries plot{std::string(to_string(v)) + " xi=" + fmt(xi) + " (p, error)", {}};
        for (int p : c.p_list) {
          const Job job{&m.mesh, m.spec, *c.k, p, v};
          CsvRow row{tag, solve_and_measure(job, c, make), c.offset, m.spec};
          plot.points.emplace_back(p, row.report.l2_rel_error);
          result.rows.push_back(std::move(row));
        }
        result.plots.push_back(std::move(plot));
      }
  }
}

/// Patch tolerance on the relative L2 error.
constexpr double kPatchTolerance = 1e-8;

void run_patch(const ExperimentConfig& c, ExperimentResult& result) {
  const auto meshes = build_all(c);
  for (int p : c.p_list) {
    // fixed random amplitudes, reproducible from the seed
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<cplx> amps(p);
    for (auto& a : amps) a = cplx(unit(rng), unit(rng));

    for (const auto& m : meshes)
      for (Variant v : c.variants) {
        auto single = [](const WaveContext& ctx) {
          return ExactSolution::plane_waves(ctx.k, {ctx.directions[0]}, {1.0});
        };
        auto combo = [&amps](const WaveContext& ctx) {
          return ExactSolution::plane_waves(ctx.k, ctx.directions.directions, amps);
        };
        const Job job{&m.mesh, m.spec, *c.k, p, v};
        for (auto [tag, make] : {std::pair<std::string, std::function<ExactSolution(const WaveContext&)>>{
                                     "patch:pw1", single},
                                 {"patch:combination", combo}}) {
          CsvRow row{tag, solve_and_measure(job, c, make), c.offset, m.spec};
          const bool ok = row.report.l2_rel_error <= kPatchTolerance;
          result.notes.push_back(std::string(ok ? "PASS " : "FAIL ") + tag + " " + m.spec +
                                 " p=" + std::to_string(p) +
                                 " error=" + fmt(row.report.l2_rel_error, 4));
          result.rows.push_back(std::move(row));
        }
      }
  }
}

void run_infsup(const ExperimentConfig& c, ExperimentResult& result) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> nverts(3, 8);
  for (int p : c.p_list) {
    WaveContext ctx(*c.k, equispaced_directions(p, c.offset));
    PlotSeries computed{"beta p=" + std::to_string(p) + " (hk, beta)", {}};
    PlotSeries reference{"reference 1-2(hk)^2/pi^2 (hk, beta)", {}};
    int above = 0;
    std::ostringstream table;
    table << std::setprecision(10);
    if (result.cell_table.empty()) table << "p,cell,n_vertices,hk,beta,beta_reference,retained_rank\n";
    for (int i = 0; i < c.cells; ++i) {
      const double hk = 0.1 + 0.9 * unit(rng);
      const auto poly = random_convex_polygon(rng, nverts(rng), hk / ctx.k);
      const InfSupResult r = local_infsup_beta(element_geometry(poly), ctx);
      computed.points.emplace_back(r.hk, r.beta);
      reference.points.emplace_back(r.hk, r.beta_reference);
      if (r.beta > 0.0 && r.beta >= r.beta_reference) ++above;
      table << p << ',' << i << ',' << poly.size() << ',' << r.hk << ',' << r.beta << ','
            << r.beta_reference << ',' << r.retained_rank << '\n';
    }
    result.cell_table += table.str();
    result.notes.push_back("p=" + std::to_string(p) + ": beta > 0 and beta >= reference on " +
                           std::to_string(above) + "/" + std::to_string(c.cells) + " cells");
    result.plots.push_back(std::move(computed));
    result.plots.push_back(std::move(reference));
  }
}

}  // namespace

std::vector<MeshItem> parse_mesh_spec(const std::string& spec) {
  std::vector<MeshItem> items;
  for (const auto& part : split_on(spec, ';')) {
    if (part.empty()) continue;
    const auto colon = part.find(':');
    if (colon == std::string::npos)
      throw UsageError("mesh spec '" + part + "' must look like family:values");
    const std::string family = part.substr(0, colon);
    const std::string values = part.substr(colon + 1);
    if (family == "file") {
      for (const auto& f : split_on(values, ',')) {
        if (f.empty()) throw UsageError("empty file name in mesh spec '" + part + "'");
        if (!std::filesystem::exists(f)) throw UsageError("mesh file not found: " + f);
        items.push_back({MeshFamily::File, 0, f});
      }
      continue;
    }
    MeshFamily fam;
    if (family == "structured")
      fam = MeshFamily::Structured;
    else if (family == "voronoi")
      fam = MeshFamily::Voronoi;
    else if (family == "chevron")
      fam = MeshFamily::Chevron;
    else
      throw UsageError("unknown mesh family '" + family +
                       "' (expected structured, voronoi, chevron or file)");
    const auto sizes = parse_int_list(values);
    if (sizes.empty()) throw UsageError("mesh spec '" + part + "' lists no sizes");
    for (int n : sizes) {
      if (n < (fam == MeshFamily::Voronoi ? 4 : 1))
        throw UsageError("mesh size out of range in '" + part + "'");
      items.push_back({fam, n, {}});
    }
  }
  if (items.empty()) throw UsageError("no mesh given");
  return items;
}

std::string describe(const MeshItem& item, unsigned long long seed, int lloyd) {
  switch (item.family) {
    case MeshFamily::Structured: return "structured:" + std::to_string(item.size);
    case MeshFamily::Chevron: return "chevron:" + std::to_string(item.size);
    case MeshFamily::Voronoi:
      return "voronoi:" + std::to_string(item.size) + ":seed=" + std::to_string(seed) +
             ":lloyd=" + std::to_string(lloyd);
    case MeshFamily::File: return "file:" + item.path.string();
  }
  return "?";
}

PolygonalMesh build_mesh(const MeshItem& item, unsigned long long seed, int lloyd) {
  switch (item.family) {
    case MeshFamily::Structured: return make_structured_triangular(item.size);
    case MeshFamily::Chevron: return make_chevron(item.size);
    case MeshFamily::Voronoi: return make_voronoi(item.size, seed, lloyd);
    case MeshFamily::File: return read_mesh(item.path);
  }
  throw InvalidArgument("unknown mesh family");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  switch (config.experiment) {
    case ExperimentKind::Table1: run_h_series(config, result, "table1"); break;
    case ExperimentKind::VoronoiH: run_h_series(config, result, "voronoi_h"); break;
    case ExperimentKind::PConv: run_pconv(config, result); break;
    case ExperimentKind::Pollution: run_pollution(config, result); break;
    case ExperimentKind::Singular: run_singular(config, result); break;
    case ExperimentKind::Patch: run_patch(config, result); break;
    case ExperimentKind::InfSup: run_infsup(config, result); break;
  }
  return result;
}

ExperimentResult run_and_write(const ExperimentConfig& config, std::ostream& log) {
  std::filesystem::create_directories(config.out);
  const std::string name(to_string(config.experiment));
  {
    std::ofstream cfg(config.out / "config.txt");
    if (!cfg) throw std::runtime_error("cannot write " + (config.out / "config.txt").string());
    const std::time_t now = std::time(nullptr);
    cfg << "# resolved configuration, written " << std::put_time(std::gmtime(&now), "%FT%TZ")
        << '\n';
    write_config(cfg, config);
  }
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult result = run_experiment(config);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!result.rows.empty()) write_csv(config.out / (name + ".csv"), result.rows);
  write_plot_data(config.out / (name + ".dat"), result.plots);

  if (!result.cell_table.empty()) {
    std::ofstream cells(config.out / (name + "_cells.csv"));
    cells << result.cell_table;
  }

  if (!result.rows.empty()) write_csv(log, result.rows);
  log << result.cell_table;
  for (const auto& n : result.notes) log << n << '\n';
  log << name << ": " << result.rows.size() << " solves in " << fmt(secs, 3) << " s, output in "
      << config.out.string() << '\n';
  return result;
}

}  // namespace pwvem
