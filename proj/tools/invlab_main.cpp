#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "invlab/ring.hpp"
#include "invlab/scenario.hpp"

using namespace invlab;

int main(int argc, char** argv) {
  CLI::App app{"exact invariant laboratory for truncated coverings"};
  app.require_subcommand(1);
  app.fallthrough();  // --format/--truncation may follow the subcommand

  std::string format = "text";
  int truncation = 0;
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "tree"}));
  app.add_option("--truncation", truncation,
                 "override the scenario truncation order");

  std::string run_file;
  CLI::App* run = app.add_subcommand("run", "run one scenario file");
  run->add_option("file", run_file, "scenario file")->required();

  std::string tag, dir = default_scenario_dir();
  int jobs = 1;
  bool list_only = false;
  CLI::App* corpus = app.add_subcommand("corpus", "run the scenario corpus");
  corpus->add_option("--tag", tag, "only scenarios carrying this tag");
  corpus->add_option("--jobs", jobs, "scenario-level worker count (0 = auto)");
  corpus->add_option("--dir", dir, "scenario directory");
  corpus->add_flag("--list", list_only, "list matching scenarios and exit");

  std::string show_name, show_artifact, show_dir = default_scenario_dir();
  CLI::App* show = app.add_subcommand("show", "print one scenario artifact");
  show->add_option("scenario", show_name, "scenario name")->required();
  show->add_option("artifact", show_artifact, "artifact name")->required();
  show->add_option("--dir", show_dir, "scenario directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  RunOptions opt;
  opt.truncation_override = truncation;

  try {
    if (*run) {
      ScenarioReport rep = run_scenario(load_scenario(run_file), opt);
      std::cout << rep.render(format, true);
      return rep.failed() ? 1 : 0;
    }
    if (*corpus) {
      if (list_only) {
        for (const std::string& f : corpus_files(dir)) {
          Scenario s = load_scenario(f);
          if (!tag.empty() && !s.has_tag(tag)) continue;
          std::cout << s.name;
          for (const std::string& t : s.tags) std::cout << " #" << t;
          std::cout << "\n";
        }
        return 0;
      }
      CorpusReport rep = run_corpus(dir, tag, jobs, opt);
      std::cout << rep.render(format, true);
      return rep.failed() ? 1 : 0;
    }
    if (*show) {
      for (const std::string& f : corpus_files(show_dir)) {
        Scenario s = load_scenario(f);
        if (s.name != show_name) continue;
        ScenarioReport rep = run_scenario(s, opt);
        std::string a = rep.artifact(show_artifact);
        if (a.empty()) {
          std::cerr << "no artifact '" << show_artifact << "' in '"
                    << show_name << "'\n";
          return 1;
        }
        std::cout << a << "\n";
        return 0;
      }
      std::cerr << "no scenario named '" << show_name << "' under " << show_dir
                << "\n";
      return 1;
    }
  } catch (const invlab::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == "parse" ? 2 : 1;
  }
  return 2;
}
