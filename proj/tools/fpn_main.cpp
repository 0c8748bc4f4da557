// fpn: run or draw a fuzzy Petri net from a JSON file.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "concierge/error.hpp"
#include "concierge/fpn.hpp"
#include "concierge/text.hpp"

using namespace concierge;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path, path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : ", ") + format_number(x);
  return "[" + out + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy Petri net runner"};
  app.require_subcommand(1);

  std::string net_file, marking_file;
  double lambda = 0.1;
  bool trace = false, json = false;

  auto* run = app.add_subcommand("run", "Reason to a fixpoint and print every proposition's degree");
  run->add_option("--net", net_file, "Net JSON file")->required();
  run->add_option("--marking", marking_file, "Initial marking JSON (place id -> degree)");
  run->add_option("--lambda", lambda, "Firing threshold")->check(CLI::Range(0.0, 1.0));
  run->add_flag("--trace", trace, "List firings in order");
  run->add_flag("--json", json, "Print the final marking as JSON");

  auto* dot = app.add_subcommand("dot", "Print the net in Graphviz DOT");
  dot->add_option("--net", net_file, "Net JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    auto doc = fpn::parse_net_document(slurp(net_file));
    if (dot->parsed()) {
      std::cout << fpn::export_dot(doc.net);
      return 0;
    }
    fpn::Marking initial = doc.marking.value_or(fpn::Marking{});
    if (!marking_file.empty()) initial = fpn::marking_from_json(slurp(marking_file), &doc.net);
    if (!doc.marking && marking_file.empty()) throw Error(ErrorCode::kValidation, "no marking given", "--marking");

    fpn::ReasoningConfig cfg;
    cfg.lambda = lambda;
    const auto result = fpn::run(doc.net, initial, cfg);
    if (json) {
      std::cout << fpn::marking_to_json(result.marking) << "\n";
      return 0;
    }
    if (trace) {
      for (const auto& f : result.trace)
        std::cout << "iteration " << f.iteration << ": " << f.transition << " inputs " << join(f.inputs)
                  << " -> " << format_number(f.produced) << "\n";
    }
    for (const auto& p : doc.net.places())
      std::cout << p.proposition << " " << format_number(result.marking.degree(p.id)) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
}
