#include "parafree/cli.hpp"

#include "parafree/error.hpp"
#include "parafree/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace parafree {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void diagnose(std::ostream& err, std::string_view code, const std::string& message,
              std::optional<std::size_t> position = std::nullopt) {
  nlohmann::json body = {{"code", std::string(code)}, {"message", message}};
  if (position) body["position"] = *position;
  err << dump({{"error", std::move(body)}});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parafreeness of graphs of free groups with cyclic edge groups", "parafree"};
  app.require_subcommand(1);

  std::string file;
  auto* check = app.add_subcommand("check", "Decide whether the fundamental group is parafree");
  check->add_option("file", file, "Instance file")->required();

  auto* abel = app.add_subcommand("abelianization", "Invariants of the abelianization");
  abel->add_option("file", file, "Instance file")->required();

  SearchBounds bounds;
  std::string edge;
  auto* witness = app.add_subcommand("witness", "Search UT(n, p) for a nilpotent witness");
  witness->add_option("file", file, "Instance file")->required();
  witness->add_option("--edge", edge, "Cyclic edge id")->required();
  witness->add_option("--dims", bounds.dims, "Matrix dimensions")->delimiter(',');
  witness->add_option("--primes", bounds.primes, "Primes")->delimiter(',');
  witness->add_option("--cap", bounds.exhaustive_cap, "Exhaustive node cap per target");
  witness->add_option("--samples", bounds.sample_count, "Random samples per target");
  witness->add_option("--seed", bounds.seed, "Sampling seed");

  std::string word;
  auto* nf = app.add_subcommand("normal-form", "Reduce a word of the fundamental group");
  nf->add_option("file", file, "Instance file")->required();
  nf->add_option("--word", word, "Word over generators and stable letters")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "UsageError", e.what());
    return 1;
  }

  try {
    const GraphOfGroups g = parse_instance(read_file(file));
    nlohmann::json report;
    if (check->parsed()) {
      report = verdict_report(check_gog(g));
    } else if (abel->parsed()) {
      report = abelianization_report(g);
    } else if (witness->parsed()) {
      report = witness_report(g, edge, bounds);
    } else {
      report = normal_form_report(g, word);
    }
    out << dump(report);
    return 0;
  } catch (const WordSyntaxError& e) {
    diagnose(err, to_string(e.code()), e.what(), e.position());
    return 1;
  } catch (const Error& e) {
    diagnose(err, to_string(e.code()), e.what());
    return e.is_input_error() ? 1 : 2;
  } catch (const std::exception& e) {
    diagnose(err, "InternalError", e.what());
    return 2;
  }
}

}  // namespace parafree
