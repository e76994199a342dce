// diskfov: command-line access to every library operation.
//
// Matrices are read as JSON ({"n", "entries": [[[re, im], ...], ...]}) from a
// path or from stdin ("-"). Results go to stdout as JSON (CSV for boundary
// and experiment tables); human-readable notes go to stderr.
// Exit status: 0 success, 2 invalid input, 3 numerical failure, 1 failed selftest.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <diskfov/acceptance.hpp>
#include <diskfov/classify3.hpp>
#include <diskfov/constructors.hpp>
#include <diskfov/diskgeom.hpp>
#include <diskfov/matrix_io.hpp>
#include <diskfov/optimize.hpp>
#include <diskfov/radius.hpp>
#include <diskfov/rng.hpp>

using namespace diskfov;

namespace {

struct Globals {
  std::uint64_t seed = 42;
  double tol = 0.0;  // 0: each command's own default
  int grid = 256;
};

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

double tol_or(const Globals& g, double fallback) { return g.tol > 0.0 ? g.tol : fallback; }

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ValidationError("cannot write " + path);
  return file;
}

Matrix generate(const std::string& name, std::size_t n, const std::vector<double>& angles, double xi_re,
                double xi_im, double phi, double psi, std::uint64_t seed) {
  if (name == "crabb") return crabb(n);
  if (name == "jordan2") return jordan2();
  if (name == "jordan3") return jordan3();
  if (name == "e0") return e0();
  if (name == "h") return h_subgradient(n);
  if (name == "superdiag") {
    std::vector<double> s, c;
    for (double t : angles) {
      s.push_back(std::sin(t));
      c.push_back(std::cos(t));
    }
    return superdiag_from_sc(s, c);
  }
  if (name == "y") return y_family({xi_re, xi_im});
  if (name == "z") return z_family(phi, psi);
  if (name == "random") {
    Rng rng(seed);
    return rng.complex_normal_matrix(n, n);
  }
  throw ValidationError("gen: unknown matrix '" + name +
                        "' (crabb, jordan2, jordan3, e0, h, superdiag, y, z, random)");
}

json certificate_json(const SmoothnessCertificate& c) {
  json j = {{"valid", c.valid},
            {"is_disk", c.is_disk},
            {"simple_on_circle", c.simple_on_circle},
            {"eigvec_matches_Gf", c.eigvec_matches_Gf},
            {"min_gap", c.min_gap},
            {"support_deviation", c.support_deviation},
            {"distortion", c.distortion},
            {"max_eigvec_sine", c.max_eigvec_sine},
            {"g_condition", c.g_condition},
            {"span_rank", c.span_rank},
            {"validation_rank", c.validation_rank}};
  j["codimension"] = c.codimension ? json(*c.codimension) : json(nullptr);
  j["subdiff_dim"] = c.subdiff_dim ? json(*c.subdiff_dim) : json(nullptr);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical radius, fields of values and disk matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for random draws")->capture_default_str();
  app.add_option("--tol", g.tol, "Tolerance override (each command documents its default)")
      ->check(CLI::PositiveNumber);
  app.add_option("--grid", g.grid, "Angle grid for radius searches")->check(CLI::Range(8, 1 << 20))->capture_default_str();

  std::string input = "-";
  auto add_input = [&](CLI::App* sub) { sub->add_option("matrix", input, "Matrix JSON path, or - for stdin")->required(); };

  auto* radius = app.add_subcommand("radius", "Numerical radius r(X) and a maximizing angle");
  add_input(radius);
  auto* inner = app.add_subcommand("inner", "Minimum of the support function (inner radius when 0 is inside W(X))");
  add_input(inner);
  auto* distortion = app.add_subcommand("distortion", "r(X) minus the minimum support value");
  add_input(distortion);

  auto* fov = app.add_subcommand("fov", "Boundary of the field of values as CSV");
  add_input(fov);
  int fov_points = 256;
  std::string fov_csv;
  fov->add_option("--points", fov_points, "Number of boundary angles")->check(CLI::Range(3, 1 << 20));
  fov->add_option("--csv", fov_csv, "Output file (default stdout)");

  auto* disk = app.add_subcommand("disk-check", "Is W(X) a disk centred at 0? (tol default 1e-8)");
  add_input(disk);

  auto* subdiff = app.add_subcommand("subdiff", "Sampled generators and affine dimension of the subdifferential");
  add_input(subdiff);
  std::size_t subdiff_count = 0;
  subdiff->add_option("--count", subdiff_count, "Number of angles (default 4n+3)");

  auto* certify = app.add_subcommand("certify", "Partial-smoothness certificate for a disk matrix (tol default 1e-8)");
  add_input(certify);
  std::string g_path;
  certify->add_option("--g", g_path, "Certificate matrix G as JSON (default identity)");

  auto* cls = app.add_subcommand("classify3", "Class of a 3x3 matrix (tol default 1e-6)");
  add_input(cls);

  auto* gen = app.add_subcommand("gen", "Emit a named matrix as JSON");
  std::string gen_name;
  std::size_t gen_n = 3;
  std::vector<double> gen_angles;
  double xi_re = 0.0, xi_im = 0.0, phi = 0.0, psi = 0.0;
  gen->add_option("name", gen_name, "crabb, jordan2, jordan3, e0, h, superdiag, y, z, random")->required();
  gen->add_option("--n", gen_n, "Order (crabb, h, random)")->check(CLI::Range(1, 64));
  gen->add_option("--angles", gen_angles, "superdiag: angles in (0, pi/2), one per interior entry")->delimiter(',');
  gen->add_option("--xi-re", xi_re, "y: real part of xi");
  gen->add_option("--xi-im", xi_im, "y: imaginary part of xi");
  gen->add_option("--phi", phi, "z: phi in [0, pi/2]");
  gen->add_option("--psi", psi, "z: psi");

  auto* prox = app.add_subcommand("prox", "prox of the numerical radius at U (tol default 1e-7)");
  add_input(prox);
  std::string prox_out;
  int prox_max_iter = 5000;
  prox->add_option("--out", prox_out, "Also write the result matrix to this file");
  prox->add_option("--max-iter", prox_max_iter, "Iteration limit")->check(CLI::PositiveNumber);

  auto* sofb = app.add_subcommand("sofb", "Seeded experiment: minimize r(A + B K C) over random real triples");
  std::size_t sn = 5, sm = 3, sp = 3, trials = 50;
  int restarts = 1;
  unsigned threads = 0;
  double threshold = 1e-7;
  std::string sofb_csv;
  sofb->add_option("--n", sn, "State dimension")->check(CLI::Range(1, 64));
  sofb->add_option("--m", sm, "Columns of B")->check(CLI::Range(1, 64));
  sofb->add_option("--p", sp, "Rows of C")->check(CLI::Range(1, 64));
  sofb->add_option("--trials", trials, "Number of random triples")->check(CLI::Range(1, 1000000));
  sofb->add_option("--threshold", threshold, "Disk threshold on r - inner radius")->check(CLI::PositiveNumber);
  sofb->add_option("--restarts", restarts, "Bundle runs per trial (K = 0, then random starts)")->check(CLI::Range(1, 100));
  sofb->add_option("--threads", threads, "Worker threads (0: all cores)");
  sofb->add_option("--csv", sofb_csv, "Per-trial CSV (trial,r_opt,distortion,disk); default stdout");

  auto* selftest = app.add_subcommand("selftest", "Run the packaged acceptance suite");
  std::vector<int> only;
  selftest->add_option("--only", only, "Criteria to run (default all)")->check(CLI::Range(1, 9))->delimiter(',');
  selftest->add_option("--threads", threads, "Worker threads for the feedback table (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*radius) {
      const auto r = numerical_radius(read_matrix(input), g.grid);
      emit({{"r", r.value}, {"argmax_theta", r.argmax_theta}});
    } else if (*inner) {
      const auto r = inner_support(read_matrix(input), g.grid);
      emit({{"inner", r.value}, {"argmin_theta", r.argmax_theta}, {"origin_outside", r.origin_outside}});
    } else if (*distortion) {
      const Matrix x = read_matrix(input);
      const double r = numerical_radius(x, g.grid).value;
      const double lo = inner_support(x, g.grid).value;
      emit({{"distortion", r - lo}, {"r", r}, {"inner", lo}});
    } else if (*fov) {
      const auto pts = fov_boundary(read_matrix(input), fov_points);
      std::ofstream file;
      write_boundary_csv(open_out(fov_csv, file), pts);
      std::size_t faces = 0;
      for (const auto& p : pts) faces += p.face ? 1 : 0;
      std::cerr << pts.size() << " boundary points, " << faces << " on flat faces\n";
    } else if (*disk) {
      const auto d = is_disk_near(read_matrix(input), tol_or(g, 1e-8));
      emit({{"is_disk", d.is_disk}, {"max_deviation", d.max_deviation}, {"mean", d.mean}, {"distortion", d.distortion}});
    } else if (*subdiff) {
      const Matrix x = read_matrix(input);
      const std::size_t count = subdiff_count ? subdiff_count : 4 * x.n() + 3;
      const auto gens = subdiff_sample(x, count);
      std::vector<Matrix> mats;
      json list = json::array();
      for (const auto& s : gens) {
        mats.push_back(s.matrix);
        list.push_back({{"theta", s.theta}, {"matrix", matrix_to_json(s.matrix)}});
      }
      const double tol = tol_or(g, 1e-8);
      emit({{"dimension", affine_dimension(mats, tol)}, {"expected_2n", 2 * x.n()}, {"generators", list}});
    } else if (*certify) {
      const Matrix x = read_matrix(input);
      const Matrix gm = g_path.empty() ? Matrix::identity(x.n()) : read_matrix(g_path);
      const auto c = certify_partial_smoothness(x, gm, 0, tol_or(g, 1e-8));
      emit(certificate_json(c));
      std::cerr << (c.valid ? "certificate valid" : "certificate NOT valid") << "\n";
    } else if (*cls) {
      const auto c = classify(read_matrix(input), tol_or(g, 1e-6));
      json j = {{"label", to_string(c.label)},
                {"disk", c.disk},
                {"a", cplx_json(c.a)},
                {"b", cplx_json(c.b)},
                {"c", cplx_json(c.c)},
                {"d", cplx_json(c.d)},
                {"folded", c.folded}};
      auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
      j["margins"] = {{"abs_a", num(c.abs_a)},
                      {"abs_d", num(c.abs_d)},
                      {"two_c_minus_b", num(c.two_c_minus_b)},
                      {"abcd", num(c.abcd)},
                      {"schur_residual", num(c.schur_residual)}};
      emit(j);
    } else if (*gen) {
      emit(matrix_to_json(generate(gen_name, gen_n, gen_angles, xi_re, xi_im, phi, psi, g.seed)));
    } else if (*prox) {
      const Matrix u = read_matrix(input);
      ProxOptions opt;
      opt.tol = tol_or(g, opt.tol);
      opt.max_iter = prox_max_iter;
      opt.grid = std::min(g.grid, 64);
      const auto res = prox_numerical_radius(u, opt);
      if (!res.converged)
        throw NumericalError("prox: no convergence in " + std::to_string(res.iterations) +
                             " iterations (gap " + std::to_string(res.gap) + ")");
      if (!prox_out.empty()) write_matrix(res.x, prox_out);
      emit({{"x", matrix_to_json(res.x)},
            {"objective", res.objective},
            {"distance_bound", std::sqrt(2.0 * res.gap)},
            {"iterations", res.iterations},
            {"r", numerical_radius(res.x).value}});
    } else if (*sofb) {
      const auto s = sofb_experiment(sn, sm, sp, trials, g.seed, threshold, restarts, threads);
      std::ofstream file;
      std::ostream& os = open_out(sofb_csv, file);
      os << "trial,r_opt,distortion,disk\n";
      os.precision(17);
      for (const auto& r : s.records) os << r.trial << "," << r.r_opt << "," << r.distortion << "," << (r.disk ? 1 : 0) << "\n";
      const json summary = {{"n", sn}, {"m", sm}, {"p", sp}, {"trials", trials}, {"seed", g.seed},
                            {"threshold", threshold}, {"disk_percentage", s.disk_percentage}};
      if (sofb_csv.empty() || sofb_csv == "-")
        std::cerr << summary.dump() << "\n";
      else
        emit(summary);
    } else if (*selftest) {
      AcceptanceOptions opt;
      opt.seed = g.seed;
      opt.threads = threads;
      json results = json::array();
      bool all = true;
      for (int id : only.empty() ? all_criteria() : only) {
        const auto r = run_criterion(id, opt);
        std::cerr << format_result(r) << std::endl;
        results.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds},
                           {"detail", r.detail}});
        all = all && r.pass;
      }
      emit(results);
      return all ? 0 : 1;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
