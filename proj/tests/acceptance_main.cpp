// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status 0 only when every selected criterion passes.

#include <iostream>

#include <CLI11.hpp>

#include <diskfov/acceptance.hpp>

int main(int argc, char** argv) {
  CLI::App app{"diskfov acceptance suite"};
  std::vector<int> only;
  diskfov::AcceptanceOptions opt;
  bool verbose = false;
  app.add_option("--only", only, "Criteria to run (default: all)")->check(CLI::Range(1, 9))->delimiter(',');
  app.add_option("--seed", opt.seed, "Seed for every random draw");
  app.add_option("--threads", opt.threads, "Workers for the feedback experiment (0: all cores)");
  app.add_flag("-v,--verbose", verbose, "Per-case diagnostics on stderr");
  CLI11_PARSE(app, argc, argv);
  if (verbose) opt.log = &std::cerr;

  bool all = true;
  for (int id : only.empty() ? diskfov::all_criteria() : only) {
    const auto r = diskfov::run_criterion(id, opt);
    std::cout << diskfov::format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
