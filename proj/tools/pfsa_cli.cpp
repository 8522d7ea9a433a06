// pfsa: command-line surface over the PFSA algebra, stream engine,
// annihilator and estimation modules.
//
// Exit codes: 0 success, 2 usage error, 3 validation failure, 4 runtime error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pfsa/algebra.hpp"
#include "pfsa/analysis.hpp"
#include "pfsa/annihilator.hpp"
#include "pfsa/bench.hpp"
#include "pfsa/catalog.hpp"
#include "pfsa/estimation.hpp"
#include "pfsa/model_io.hpp"
#include "pfsa/stream.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 4;

pfsa::Pfsa resolve_model(const std::string& ref) {
  try {
    return pfsa::catalog::by_id(ref);
  } catch (const std::out_of_range&) {
    return pfsa::load_model(ref);
  }
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pfsa::FileFormatError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PFSA algebra, stream generation and semantic-annihilation classification"};
  app.require_subcommand(1);

  // validate
  std::string validate_model;
  auto* cmd_validate = app.add_subcommand("validate", "Check a model file against all invariants");
  cmd_validate->add_option("model", validate_model, "model file")->required();

  // gen
  std::string gen_model, gen_out;
  std::uint64_t gen_n = 10000, gen_seed = 0;
  auto* cmd_gen = app.add_subcommand("gen", "Generate a symbol stream from a model");
  cmd_gen->add_option("model", gen_model, "catalog id or model file")->required();
  cmd_gen->add_option("-n,--length", gen_n, "stream length");
  cmd_gen->add_option("--seed", gen_seed, "random seed");
  cmd_gen->add_option("-o,--out", gen_out, "output stream file")->required();

  // invert / add / compose
  std::string un_model, un_out;
  auto* cmd_invert = app.add_subcommand("invert", "Rowwise-reciprocal inverse of a model");
  cmd_invert->add_option("model", un_model, "catalog id or model file")->required();
  cmd_invert->add_option("-o,--out", un_out, "output model file")->required();

  std::string bin_m1, bin_m2, bin_out;
  auto* cmd_add = app.add_subcommand("add", "Group sum of two models");
  cmd_add->add_option("m1", bin_m1)->required();
  cmd_add->add_option("m2", bin_m2)->required();
  cmd_add->add_option("-o,--out", bin_out, "output model file")->required();

  std::string comp_m1, comp_m2, comp_out;
  auto* cmd_compose = app.add_subcommand("compose", "Synchronous composition of two models");
  cmd_compose->add_option("m1", comp_m1)->required();
  cmd_compose->add_option("m2", comp_m2)->required();
  cmd_compose->add_option("-o,--out", comp_out, "output model file")->required();

  // annihilate
  std::string ann_pattern, ann_stream, ann_out_prefix = "annihilated";
  std::uint64_t ann_seed = 0;
  auto* cmd_annihilate = app.add_subcommand("annihilate", "Run a pattern's annihilator bank over a stream");
  cmd_annihilate->add_option("pattern", ann_pattern, "catalog id or model file")->required();
  cmd_annihilate->add_option("--stream", ann_stream, "stream file (- for stdin)")->required();
  cmd_annihilate->add_option("--seed", ann_seed, "bank seed");
  cmd_annihilate->add_option("-o,--out-prefix", ann_out_prefix, "emitted stream file prefix");

  // classify
  std::string cls_library, cls_stream, cls_report;
  double cls_tau = 0.05;
  int cls_depth = 3;
  std::uint64_t cls_min_emitted = 2000, cls_seed = 0;
  auto* cmd_classify = app.add_subcommand("classify", "Score a stream against a library of patterns");
  cmd_classify->add_option("--library", cls_library, "directory of model files")->required();
  cmd_classify->add_option("--stream", cls_stream, "stream file (- for stdin)")->required();
  cmd_classify->add_option("--tau", cls_tau, "white-noise score threshold");
  cmd_classify->add_option("--depth", cls_depth, "detector context depth");
  cmd_classify->add_option("--min-emitted", cls_min_emitted, "minimum emitted symbols per verdict");
  cmd_classify->add_option("--seed", cls_seed, "bank seed");
  cmd_classify->add_option("--report", cls_report, "also write the report to this file");

  // estimate
  std::string est_stream, est_out, est_alphabet = "01";
  int est_depth = 2;
  double est_merge = 0.0;
  auto* cmd_estimate = app.add_subcommand("estimate", "Estimate a context model from a stream");
  cmd_estimate->add_option("--stream", est_stream, "stream file (- for stdin)")->required();
  cmd_estimate->add_option("-d,--depth", est_depth, "context depth");
  cmd_estimate->add_option("--merge", est_merge, "state-merge tolerance (0 disables)");
  cmd_estimate->add_option("--alphabet", est_alphabet, "symbol labels, one character each");
  cmd_estimate->add_option("-o,--out", est_out, "output model file")->required();

  // bench
  std::string bench_model, bench_out;
  std::uint64_t bench_ticks = 20000;
  int bench_seeds = 1;
  auto* cmd_bench = app.add_subcommand("bench", "Race direct estimation against annihilation");
  cmd_bench->add_option("--model", bench_model, "catalog id or model file")->required();
  cmd_bench->add_option("--ticks", bench_ticks, "stream length per seed");
  cmd_bench->add_option("--seeds", bench_seeds, "number of seeds");
  cmd_bench->add_option("-o,--out", bench_out, "output CSV file")->required();

  // export
  std::string exp_model, exp_out;
  auto* cmd_export = app.add_subcommand("export", "Write a catalog model (or copy a file) as JSON");
  cmd_export->add_option("model", exp_model, "catalog id or model file")->required();
  cmd_export->add_option("-o,--out", exp_out, "output model file")->required();

  // profile
  std::string prof_model;
  auto* cmd_profile = app.add_subcommand("profile", "Print the annihilation performance profile");
  cmd_profile->add_option("model", prof_model, "catalog id or model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cmd_validate) {
      const pfsa::RawModel raw = pfsa::read_raw_model(validate_model);
      const auto violations = pfsa::Pfsa::check(raw);
      if (violations.empty()) {
        std::cout << "valid\n";
        return 0;
      }
      for (const auto& v : violations) {
        std::cout << pfsa::to_string(v.kind) << ": " << v.detail << "\n";
      }
      return kExitValidation;
    }

    if (*cmd_gen) {
      const pfsa::Pfsa g = resolve_model(gen_model);
      pfsa::SymbolStream stream = pfsa::generate_stream(g, gen_n, gen_seed);
      stream.model_id = gen_model;
      pfsa::write_stream(stream, g.alphabet(), gen_out);
      return 0;
    }

    if (*cmd_invert) {
      const pfsa::Pfsa g = resolve_model(un_model);
      pfsa::write_model(pfsa::invert(g), un_out, {{"derived", "invert(" + un_model + ")"}});
      return 0;
    }

    if (*cmd_add) {
      const pfsa::Pfsa g1 = resolve_model(bin_m1);
      const pfsa::Pfsa g2 = resolve_model(bin_m2);
      pfsa::write_model(pfsa::add_general(g1, g2), bin_out,
                        {{"derived", "add(" + bin_m1 + "," + bin_m2 + ")"}});
      return 0;
    }

    if (*cmd_compose) {
      const pfsa::Pfsa g1 = resolve_model(comp_m1);
      const pfsa::Pfsa g2 = resolve_model(comp_m2);
      pfsa::write_model(pfsa::synchronous_compose(g1, g2), comp_out,
                        {{"derived", "compose(" + comp_m1 + "," + comp_m2 + ")"}});
      return 0;
    }

    if (*cmd_annihilate) {
      const pfsa::Pfsa pattern = resolve_model(ann_pattern);
      const pfsa::SymbolStream stream =
          pfsa::parse_stream(read_text(ann_stream), pattern.alphabet());
      pfsa::AnnihilatorBank bank = pfsa::build_bank(pattern, ann_seed, ann_pattern);
      const pfsa::BankFeedResult result = pfsa::bank_feed(bank, stream);
      for (int j = 0; j < bank.component_count(); ++j) {
        const std::string path = ann_out_prefix + "." + std::to_string(j) + ".txt";
        pfsa::write_stream(result.emitted[static_cast<size_t>(j)], pattern.alphabet(), path);
        std::cout << "component=" << j << " sensed=" << result.sensed
                  << " emitted=" << result.emitted[static_cast<size_t>(j)].size()
                  << " out=" << path << "\n";
      }
      return 0;
    }

    if (*cmd_classify) {
      std::vector<pfsa::LibraryEntry> library;
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(cls_library)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& path : files) {
        library.push_back({path.stem().string(), pfsa::load_model(path)});
      }
      if (library.empty()) throw pfsa::EmptyLibrary();
      const pfsa::Alphabet alphabet = library.front().model.alphabet();
      const pfsa::SymbolStream stream = pfsa::parse_stream(read_text(cls_stream), alphabet);
      pfsa::ClassifyConfig config;
      config.tau = cls_tau;
      config.detector.estimator_depth = cls_depth;
      config.detector.theta_depth = cls_depth;
      config.min_emitted = cls_min_emitted;
      const auto reports = pfsa::classify_stream(library, stream, alphabet, cls_seed, config);
      std::ostringstream text;
      bool any_positive = false;
      for (const auto& r : reports) {
        any_positive = any_positive || r.verdict;
        text << "pattern=" << r.pattern_id << " verdict=" << (r.verdict ? "positive" : "negative")
             << " best_score=" << r.best_score << " best_component=" << r.best_component
             << " sensed=" << r.sensed_length << " tau=" << r.tau << "\n";
      }
      std::cout << text.str();
      if (!cls_report.empty()) {
        std::ofstream out(cls_report);
        out << text.str();
      }
      return any_positive ? 0 : 1;
    }

    if (*cmd_estimate) {
      std::vector<std::string> labels;
      for (char c : est_alphabet) labels.emplace_back(1, c);
      const pfsa::Alphabet alphabet{labels};
      const pfsa::SymbolStream stream = pfsa::parse_stream(read_text(est_stream), alphabet);
      pfsa::DMarkovConfig cfg;
      cfg.depth = est_depth;
      cfg.merge_tol = est_merge;
      const pfsa::EstimatedModel est = pfsa::estimate_dmarkov(stream, alphabet, cfg);
      pfsa::write_model(est.model, est_out,
                        {{"provenance", "estimated"},
                         {"depth", std::to_string(est_depth)},
                         {"stream", est_stream}});
      std::cout << "states=" << est.model.state_count()
                << " undersampled=" << est.undersampled.size() << "\n";
      return 0;
    }

    if (*cmd_bench) {
      const pfsa::Pfsa truth = resolve_model(bench_model);
      pfsa::BenchConfig cfg;
      cfg.max_ticks = bench_ticks;
      std::ofstream out(bench_out);
      if (!out) throw pfsa::FileFormatError("cannot open " + bench_out + " for writing");
      bool header = true;
      for (int s = 0; s < bench_seeds; ++s) {
        const auto records =
            pfsa::run_bench(truth, bench_model, static_cast<std::uint64_t>(s), cfg);
        pfsa::write_csv(records, out, header);
        header = false;
      }
      return 0;
    }

    if (*cmd_export) {
      write_model(resolve_model(exp_model), exp_out, {{"name", exp_model}});
      return 0;
    }

    if (*cmd_profile) {
      const pfsa::Pfsa g = resolve_model(prof_model);
      const pfsa::AnnihilationProfile profile = pfsa::annihilation_profile(g);
      std::cout << "states=" << g.state_count() << " alphabet=" << g.alphabet().size() << "\n";
      for (int q = 0; q < g.state_count(); ++q) {
        std::cout << "state=" << g.state_labels()[static_cast<size_t>(q)]
                  << " stationary=" << profile.stationary[static_cast<size_t>(q)]
                  << " harmonic=" << profile.harmonic[static_cast<size_t>(q)] << "\n";
      }
      std::cout << "lambda=" << profile.lambda << "\n";
      std::cout << "beta1=" << profile.beta1 << "\n";
      std::cout << "bound=" << profile.coarse_bound << "\n";
      if (profile.white_noise_boundary) std::cout << "note=white-noise boundary case\n";
      return 0;
    }
  } catch (const pfsa::ValidationError& e) {
    std::cerr << "validation error:\n";
    for (const auto& v : e.violations()) {
      std::cerr << "  " << pfsa::to_string(v.kind) << ": " << v.detail << "\n";
    }
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
