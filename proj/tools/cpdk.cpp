// cpdk command line front end.
//
//   cpdk validate <system.json> [--samples N] [--tol T] [--seed S]
//   cpdk index <system.json> [--exprs "(base x)" ...] [--tol T]
//   cpdk tensor <a.json> <b.json> -o <out.json>
//   cpdk examples <name> -o <out.json> [--seed S]
//
// Exit codes: 0 success, 1 property failure, 2 input error, 3 I/O error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpdk/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"conditionally positive kernel toolkit"};
  app.require_subcommand(1);

  std::string sys_path;
  cpdk::ValidateOptions vopt;
  CLI::App* validate = app.add_subcommand("validate", "run the full check battery on a system");
  validate->add_option("system", sys_path, "system file")->required();
  validate->add_option("--samples", vopt.samples, "random tuples for the positivity check")
      ->check(CLI::PositiveNumber);
  validate->add_option("--tol", vopt.tol, "residual tolerance")->check(CLI::PositiveNumber);
  validate->add_option("--seed", vopt.seed, "sampling seed");

  std::string index_path;
  std::vector<std::string> expr_literals;
  double index_tol = 1e-9;
  CLI::App* index = app.add_subcommand("index", "numerical rank of a family of expressions");
  index->add_option("system", index_path, "system file")->required();
  index->add_option("--exprs", expr_literals, "expression literals (default: every base label)");
  index->add_option("--tol", index_tol, "rank cut tolerance")->check(CLI::PositiveNumber);

  std::string tensor_a, tensor_b, tensor_out;
  CLI::App* tensor = app.add_subcommand("tensor", "tensor product of two system files");
  tensor->add_option("a", tensor_a, "left factor file")->required();
  tensor->add_option("b", tensor_b, "right factor file")->required();
  tensor->add_option("-o,--out", tensor_out, "output file")->required();

  std::string example_name, example_out;
  std::uint64_t example_seed = 7;
  CLI::App* examples = app.add_subcommand("examples", "write a ready-made system file");
  examples->add_option("name", example_name, "fock-demo, twisted-demo, or random-ce")->required();
  examples->add_option("-o,--out", example_out, "output file")->required();
  examples->add_option("--seed", example_seed, "seed for random-ce");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11 reports --help through the exception path with code 0.
    return code == 0 ? 0 : 2;
  }

  if (validate->parsed())
    return cpdk::cmd_validate(sys_path, vopt, std::cout, std::cerr);
  if (index->parsed())
    return cpdk::cmd_index(index_path, expr_literals, index_tol, std::cout, std::cerr);
  if (tensor->parsed())
    return cpdk::cmd_tensor(tensor_a, tensor_b, tensor_out, std::cout, std::cerr);
  if (examples->parsed())
    return cpdk::cmd_examples(example_name, example_seed, example_out, std::cout, std::cerr);
  return 2;
}
