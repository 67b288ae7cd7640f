// Experiment driver: domain generation, eigenpair solves, nodal analysis,
// property suites, and raster/dump exports.
#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "plab/lab.hpp"

namespace {

void apply_backend(const std::string& name) {
  if (name.empty()) return;
  if (name == "scalar")
    plab::kernels::set_backend(plab::kernels::Backend::scalar);
  else if (name == "avx2")
    plab::kernels::set_backend(plab::kernels::Backend::avx2);
  else
    throw std::runtime_error("unknown backend: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarlab: p-Laplacian eigenpairs and polarization experiments on polar grids"};
  app.require_subcommand(1);

  std::string backend;
  app.add_option("--backend", backend, "kernel backend: scalar or avx2 (default: best available)");

  auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
  std::string config_path;
  run_cmd->add_option("config", config_path, "experiment config file")->required();

  auto* suite_cmd = app.add_subcommand("lemma-suite", "run the polarization property suite");
  uint64_t seed = 1;
  int masks = 100, functions = 200;
  std::string suite_out;
  suite_cmd->add_option("--seed", seed, "corpus seed");
  suite_cmd->add_option("--masks", masks, "number of symmetric masks (perturbed ones are derived)");
  suite_cmd->add_option("--functions", functions, "number of random functions");
  suite_cmd->add_option("--out", suite_out, "optional output directory for the suite CSV");

  auto* export_cmd = app.add_subcommand("export", "convert a function dump to a PGM raster");
  std::string dump_path, pgm_path;
  export_cmd->add_option("dump", dump_path, "function dump (.dat)")->required();
  export_cmd->add_option("raster", pgm_path, "output raster (.pgm)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    apply_backend(backend);
    if (*run_cmd) {
      auto config = plab::lab::load_experiment(config_path);
      auto record = plab::lab::run(config);
      std::printf("config %s: %zu rows, %d errors, %.2fs\n", record.config_hash.c_str(), record.rows.size(),
                  record.errors, record.wall_seconds);
      for (const auto& note : record.notes) std::printf("  %s\n", note.c_str());
      return record.errors == 0 ? 0 : 1;
    }
    if (*suite_cmd) {
      plab::lab::SuiteOptions opt;
      opt.seed = seed;
      opt.masks = masks;
      opt.functions = functions;
      auto record = plab::lab::lemma_suite(opt);
      for (const auto& p : record.properties)
        std::printf("%-24s %ld/%ld %s\n", p.name.c_str(), p.passes, p.cases,
                    p.ok() ? "ok" : ("FAIL " + p.witness).c_str());
      if (!suite_out.empty()) {
        std::string dir = plab::lab::resolve_output_dir(suite_out);
        std::filesystem::create_directories(dir);
        plab::write_text_file(dir + "/runs.csv", record.csv);
      }
      return record.all_pass ? 0 : 1;
    }
    if (*export_cmd) {
      auto field = plab::read_dump(dump_path);
      plab::export_raster(field, pgm_path);
      std::printf("wrote %s\n", pgm_path.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
