#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "../vendor/CLI11.hpp"
#include "bigframe/core.hpp"
#include "bigframe/instances.hpp"
#include "bigframe/report.hpp"
#include "bigframe/transforms.hpp"
#include "bigframe/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;

struct Options {
  std::string input;
  std::string output;
  std::string theorem;
  std::string kind = "generic";
  std::string which;
  std::string op;
  std::string operand;
  int dim = 4;
  int members = 4;
  int power = 1;
  int instances = 200;
  std::uint64_t seed = 0;
  std::optional<double> rank_tol;
  std::optional<double> sym_tol;
  std::optional<double> psd_tol;
};

bigframe::SpectralTolerance resolve_tolerance(const Options& opt) {
  bigframe::SpectralTolerance tol;
  if (const char* env = std::getenv("BIGFRAME_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
      throw CLI::ValidationError("BIGFRAME_TOL must be a positive decimal");
    tol.rel_sym_tol = v;
    tol.rel_psd_tol = v;
  }
  if (opt.rank_tol) tol.rel_rank_tol = *opt.rank_tol;
  if (opt.sym_tol) tol.rel_sym_tol = *opt.sym_tol;
  if (opt.psd_tol) tol.rel_psd_tol = *opt.psd_tol;
  return tol;
}

void deliver(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open output file '" + out_path + "'");
  out << text;
}

int run_analyze(const Options& opt) {
  bigframe::BiGFrameSystem sys = bigframe::load_system(opt.input);
  bigframe::ClassificationReport rep =
      bigframe::classify(sys, resolve_tolerance(opt));
  deliver(bigframe::emit_report(rep, /*machine=*/true), opt.output);
  return kExitOk;
}

int run_bounds(const Options& opt) {
  bigframe::BiGFrameSystem sys = bigframe::load_system(opt.input);
  bigframe::BoundsResult res =
      bigframe::optimal_bounds(sys, resolve_tolerance(opt));
  deliver(bigframe::emit_bounds_report(res, /*machine=*/true), opt.output);
  return kExitOk;
}

int run_verify(const Options& opt) {
  bigframe::SuiteResult res =
      bigframe::run_theorem_suite(opt.theorem, opt.instances, opt.seed);
  deliver(bigframe::emit_report(res, /*machine=*/true), opt.output);
  return res.passed() ? kExitOk : kExitFailure;
}

int run_generate(const Options& opt) {
  bigframe::GeneratorSpec spec;
  spec.ambient_dim = opt.dim;
  spec.family_size = opt.members;
  spec.kind = bigframe::parse_kind(opt.kind);
  spec.seed = opt.seed;
  bigframe::BiGFrameSystem sys = bigframe::random_system(spec);
  deliver(bigframe::serialize(sys), opt.output);
  return kExitOk;
}

int run_example(const Options& opt) {
  bigframe::BiGFrameSystem sys;
  if (opt.which == "3.4") {
    sys = bigframe::example_3_4();
  } else if (opt.which == "3.6") {
    sys = bigframe::example_3_6();
  } else {
    throw CLI::ValidationError("example name must be 3.4 or 3.6");
  }
  deliver(bigframe::serialize(sys), opt.output);
  return kExitOk;
}

int run_transform(const Options& opt) {
  bigframe::BiGFrameSystem sys = bigframe::load_system(opt.input);
  const bigframe::SpectralTolerance tol = resolve_tolerance(opt);
  bigframe::BiGFrameSystem out;
  if (opt.op == "swap") {
    out = bigframe::swap_families(sys);
  } else if (opt.op == "right-compose") {
    if (opt.operand.empty())
      throw CLI::ValidationError("right-compose needs --operand");
    out = bigframe::right_compose(sys, bigframe::load_matrix(opt.operand), tol)
              .system;
  } else if (opt.op == "positive-perturb") {
    if (opt.operand.empty())
      throw CLI::ValidationError("positive-perturb needs --operand");
    out = bigframe::positive_perturb(sys, bigframe::load_matrix(opt.operand),
                                     opt.power, tol);
  } else if (opt.op == "restrict-range") {
    if (opt.operand.empty())
      throw CLI::ValidationError("restrict-range needs --operand");
    out = bigframe::restrict_range(sys, bigframe::load_matrix(opt.operand), tol)
              .system;
  } else {
    throw CLI::ValidationError("unknown transform op '" + opt.op + "'");
  }
  deliver(bigframe::serialize(out), opt.output);
  return kExitOk;
}

void add_tolerance_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--rank-tol", opt.rank_tol, "relative rank cutoff");
  cmd->add_option("--sym-tol", opt.sym_tol, "relative Hermiticity tolerance");
  cmd->add_option("--psd-tol", opt.psd_tol, "relative PSD tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bigframe: analysis toolkit for K-bi-g-frame systems"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* analyze =
      app.add_subcommand("analyze", "classify a serialized system");
  analyze->add_option("input", opt.input, "system file")->required();
  analyze->add_option("--out", opt.output, "write the report to a file");
  add_tolerance_flags(analyze, opt);

  CLI::App* bounds =
      app.add_subcommand("bounds", "optimal frame bounds of a system");
  bounds->add_option("input", opt.input, "system file")->required();
  bounds->add_option("--out", opt.output, "write the report to a file");
  add_tolerance_flags(bounds, opt);

  CLI::App* verify =
      app.add_subcommand("verify", "run a theorem property suite");
  verify->add_option("theorem", opt.theorem, "theorem tag, e.g. 3.7")
      ->required()
      ->check(CLI::IsMember(bigframe::theorem_tags()));
  verify->add_option("--instances", opt.instances, "trials per suite")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", opt.seed, "base seed");
  verify->add_option("--out", opt.output, "write the summary to a file");

  CLI::App* generate =
      app.add_subcommand("generate", "write a seeded random system");
  generate->add_option("--dim", opt.dim, "ambient dimension")
      ->check(CLI::Range(1, 64));
  generate->add_option("--members", opt.members, "family size")
      ->check(CLI::PositiveNumber);
  generate
      ->add_option("--kind", opt.kind,
                   "generic|diagonal|parseval|rank_deficient_k|tight")
      ->check(CLI::IsMember({"generic", "diagonal", "parseval",
                             "rank_deficient_k", "tight"}));
  generate->add_option("--seed", opt.seed, "generator seed");
  generate->add_option("--out", opt.output, "output file (default stdout)");

  CLI::App* example =
      app.add_subcommand("example", "write one of the built-in fixtures");
  example->add_option("name", opt.which, "3.4 or 3.6")
      ->required()
      ->check(CLI::IsMember({"3.4", "3.6"}));
  example->add_option("--out", opt.output, "output file (default stdout)");

  CLI::App* transform =
      app.add_subcommand("transform", "apply a named transform");
  transform->add_option("input", opt.input, "system file")->required();
  transform
      ->add_option("--op", opt.op,
                   "swap|right-compose|positive-perturb|restrict-range")
      ->required();
  transform->add_option("--operand", opt.operand,
                        "matrix file for the transform operand");
  transform->add_option("--power", opt.power, "exponent for positive-perturb")
      ->check(CLI::PositiveNumber);
  transform->add_option("--out", opt.output, "output file (default stdout)");
  add_tolerance_flags(transform, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*analyze) return run_analyze(opt);
    if (*bounds) return run_bounds(opt);
    if (*verify) return run_verify(opt);
    if (*generate) return run_generate(opt);
    if (*example) return run_example(opt);
    if (*transform) return run_transform(opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const bigframe::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
