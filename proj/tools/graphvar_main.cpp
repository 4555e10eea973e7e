#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "graphvar/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"discrete variational toolkit for poly-Laplacian systems on weighted graphs"};
  app.require_subcommand(1);

  std::string graph_path, config_path, out_path, solution_path, mode, format = "summary";
  graphvar::CliOptions opts;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "summary or full")
        ->check(CLI::IsMember({"summary", "full"}));
  };

  CLI::App* cg = app.add_subcommand("check-graph", "validate a graph file and print statistics");
  cg->add_option("graph", graph_path, "graph file")->required();

  CLI::App* ch = app.add_subcommand("check-hypotheses", "evaluate the smallness conditions");
  ch->add_option("graph", graph_path, "graph file")->required();
  ch->add_option("config", config_path, "problem config")->required();
  ch->add_flag("--rational", opts.rational, "exact fraction arithmetic");
  add_format(ch);

  CLI::App* sv = app.add_subcommand("solve", "find a critical point and verify it");
  sv->add_option("mode", mode, "negative, mountain-pass or ground-state")->required();
  sv->add_option("graph", graph_path, "graph file")->required();
  sv->add_option("config", config_path, "problem config")->required();
  sv->add_option("output", out_path, "solution file to write")->required();
  sv->add_option("--starts", opts.starts, "number of solver starts");
  sv->add_option("--jobs", opts.jobs, "concurrent starts");
  sv->add_option("--seed", opts.seed, "random seed override");
  add_format(sv);

  CLI::App* vf = app.add_subcommand("verify", "check a solution file pointwise");
  vf->add_option("graph", graph_path, "graph file")->required();
  vf->add_option("config", config_path, "problem config")->required();
  vf->add_option("solution", solution_path, "solution file")->required();
  add_format(vf);

  CLI::App* em = app.add_subcommand("embedding", "compute an embedding constant");
  em->add_option("graph", graph_path, "graph file")->required();
  em->add_option("--m", opts.m, "operator order");
  em->add_option("--s", opts.s, "Sobolev exponent");
  em->add_option("--r", opts.r, "Lebesgue exponent (brute force)");
  em->add_flag("--brute-force", opts.brute_force, "certified search instead of the closed form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  opts.full = format == "full";

  if (cg->parsed()) return graphvar::run_check_graph(graph_path, std::cout, std::cerr);
  if (ch->parsed())
    return graphvar::run_check_hypotheses(graph_path, config_path, opts, std::cout,
                                          std::cerr);
  if (sv->parsed())
    return graphvar::run_solve(mode, graph_path, config_path, out_path, opts, std::cout,
                               std::cerr);
  if (vf->parsed())
    return graphvar::run_verify(graph_path, config_path, solution_path, opts, std::cout,
                                std::cerr);
  if (em->parsed()) return graphvar::run_embedding(graph_path, opts, std::cout, std::cerr);
  return 1;
}
