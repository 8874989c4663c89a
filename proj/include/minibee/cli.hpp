#pragma once

#include "minibee/animator.hpp"
#include "minibee/composer.hpp"
#include "minibee/corpus.hpp"
#include "minibee/explorer.hpp"
#include "minibee/po.hpp"
#include "minibee/refiner.hpp"
#include "minibee/render.hpp"
#include "minibee/reports.hpp"
#include "minibee/scope.hpp"
#include "minibee/service.hpp"
#include "minibee/validate.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace minibee::cli {

/// Exit statuses: clean run, defects found, bad usage or input.
inline constexpr int exit_clean = 0;
inline constexpr int exit_findings = 1;
inline constexpr int exit_error = 2;

namespace detail {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline AbstractSystem load_system(const std::string &path) { return parse_system(read_file(path)); }

inline Scope load_scope_opt(const std::string &path) {
  if (path.empty())
    return {};
  return parse_scope(read_file(path));
}

inline ExploreLimits limits_from(std::size_t max_nodes, std::size_t max_depth) {
  ExploreLimits l;
  if (max_nodes)
    l.max_nodes = max_nodes;
  if (max_depth)
    l.max_depth = max_depth;
  return l;
}

} // namespace detail

/// Runs one subcommand. `args` excludes the program name.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"minibee: analysis workbench for guarded-event abstract systems"};
  app.require_subcommand(1, 1);

  std::vector<std::string> files;
  std::string scope_path, output, format = "text", name, event;
  std::size_t max_nodes = 0, max_depth = 0, steps = 40;
  std::uint64_t seed = 1, ceiling = default_state_ceiling;
  bool dump = false;
  int port = 8080;
  std::string host = "127.0.0.1", corpus_dir = default_corpus_dir().string();

  auto *check = app.add_subcommand("check", "parse and validate specifications");
  check->add_option("files", files, "spec files")->required();

  auto *compose_cmd = app.add_subcommand("compose", "parallel composition of specifications");
  compose_cmd->add_option("files", files, "spec files, composed left to right")->required()->expected(2, -1);
  compose_cmd->add_option("-o,--output", output, "output file (default: stdout)");
  compose_cmd->add_option("--name", name, "name of the composed system");

  auto *explore_cmd = app.add_subcommand("explore", "exhaustive state exploration");
  explore_cmd->add_option("file", files, "spec file")->required()->expected(1);
  explore_cmd->add_option("--scope", scope_path, "scope file (JSON)");
  explore_cmd->add_option("--max-nodes", max_nodes, "stop adding nodes beyond this count");
  explore_cmd->add_option("--max-depth", max_depth, "do not expand nodes at this depth");
  explore_cmd->add_option("--format", format, "text | json | dot")->check(CLI::IsMember({"text", "json", "dot"}));
  explore_cmd->add_flag("--dump", dump, "append the line-oriented graph dump (text format)");

  auto *animate_cmd = app.add_subcommand("animate", "seeded random animation");
  animate_cmd->add_option("file", files, "spec file")->required()->expected(1);
  animate_cmd->add_option("--scope", scope_path, "scope file (JSON)");
  animate_cmd->add_option("--steps", steps, "step budget");
  animate_cmd->add_option("--seed", seed, "generator seed");
  animate_cmd->add_option("--format", format, "text | json | dot")->check(CLI::IsMember({"text", "json", "dot"}));

  auto *po_cmd = app.add_subcommand("po", "generate and discharge proof obligations");
  po_cmd->add_option("file", files, "spec file")->required()->expected(1);
  po_cmd->add_option("--scope", scope_path, "scope file (JSON)");
  po_cmd->add_option("--ceiling", ceiling, "maximum number of well-typed states");
  po_cmd->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

  auto *refine_cmd = app.add_subcommand("refine", "trace refinement check");
  refine_cmd->add_option("files", files, "abstract and refined spec files")->required()->expected(2);
  refine_cmd->add_option("--scope", scope_path, "scope file (JSON)");
  refine_cmd->add_option("--max-nodes", max_nodes, "exploration node limit");
  refine_cmd->add_option("--max-depth", max_depth, "exploration depth limit");
  refine_cmd->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

  auto *cbc_cmd = app.add_subcommand("cbc", "constraint-based invariant check of one event");
  cbc_cmd->add_option("file", files, "spec file")->required()->expected(1);
  cbc_cmd->add_option("--event", event, "event to check")->required();
  cbc_cmd->add_option("--scope", scope_path, "scope file (JSON)");
  cbc_cmd->add_option("--ceiling", ceiling, "maximum number of well-typed states");
  cbc_cmd->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

  auto *serve_cmd = app.add_subcommand("serve", "HTTP+JSON animation service");
  serve_cmd->add_option("--port", port, "listen port");
  serve_cmd->add_option("--host", host, "listen address");
  serve_cmd->add_option("--corpus", corpus_dir, "corpus directory listed under /specs");

  std::vector<const char *> argv{"minibee"};
  for (const auto &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_clean : exit_error;
  }

  try {
    if (check->parsed()) {
      for (const auto &f : files) {
        const auto sys = detail::load_system(f);
        out << f << ": " << sys.name << " ok (" << sys.sets.size() << " sets, " << sys.constants.size()
            << " constants, " << sys.variables.size() << " variables, " << sys.events.size() << " events)\n";
      }
      return exit_clean;
    }

    if (compose_cmd->parsed()) {
      std::vector<AbstractSystem> systems;
      for (const auto &f : files)
        systems.push_back(detail::load_system(f));
      const auto text = render_system(compose_all(systems, name));
      if (output.empty()) {
        out << text;
      } else {
        std::ofstream o(output, std::ios::binary);
        if (!(o << text))
          throw detail::InputError("cannot write " + output);
      }
      return exit_clean;
    }

    const Scope scope = detail::load_scope_opt(scope_path);

    if (explore_cmd->parsed()) {
      const auto g = explore(detail::load_system(files[0]), scope, detail::limits_from(max_nodes, max_depth));
      const auto report = make_explore_report(g);
      if (format == "dot")
        out << graph_to_dot(g);
      else if (format == "json")
        out << explore_report_json(g, report).dump(2) << '\n';
      else {
        out << render_explore_report(g, report);
        if (dump)
          out << "GRAPH\n" << dump_graph(g);
      }
      return report.has_findings(g) ? exit_findings : exit_clean;
    }

    if (animate_cmd->parsed()) {
      const Model m(detail::load_system(files[0]), scope);
      const auto log = random_animate(m, steps, seed);
      if (format == "dot")
        out << reduced_view(m, log.visited.states(), log.edges());
      else if (format == "json")
        out << animation_to_json(m.system(), log).dump(2) << '\n';
      else
        out << render_log(m.system(), log) << render_coverage(animation_coverage(m.system(), log));
      return exit_clean;
    }

    if (po_cmd->parsed()) {
      const Model m(detail::load_system(files[0]), scope);
      const auto outcomes = discharge_all(m, ceiling);
      if (format == "json")
        out << po_report_json(m.system(), outcomes).dump(2) << '\n';
      else
        out << render_po_report(m.system(), outcomes);
      bool aborted = false, failed = false;
      for (const auto &o : outcomes) {
        failed = failed || o.result.status == PoStatus::Fail;
        aborted = aborted || o.result.status == PoStatus::Aborted;
      }
      if (aborted)
        err << "error: some proof obligations were aborted; shrink the scope or raise --ceiling\n";
      return failed ? exit_findings : aborted ? exit_error : exit_clean;
    }

    if (refine_cmd->parsed()) {
      const auto report = check_refinement(detail::load_system(files[0]), detail::load_system(files[1]), scope,
                                           detail::limits_from(max_nodes, max_depth));
      if (format == "json")
        out << refinement_to_json(report).dump(2) << '\n';
      else
        out << render_refinement(report);
      return report.verdict == Verdict::Pass ? exit_clean : exit_findings;
    }

    if (cbc_cmd->parsed()) {
      const Model m(detail::load_system(files[0]), scope);
      const auto r = constraint_based_check(m, event, ceiling);
      if (format == "json")
        out << cbc_to_json(m.system(), r).dump(2) << '\n';
      else
        out << render_cbc(m.system(), r);
      return r.violation ? exit_findings : exit_clean;
    }

    if (serve_cmd->parsed()) {
      std::optional<Corpus> corpus;
      if (!corpus_dir.empty() && std::filesystem::exists(std::filesystem::path(corpus_dir) / "manifest.json"))
        corpus = load_corpus(corpus_dir);
      SessionService service(std::move(corpus));
      httplib::Server server;
      service.install(server);
      err << "listening on http://" << host << ':' << port << '\n';
      if (!server.listen(host, port)) {
        err << "error: cannot listen on " << host << ':' << port << '\n';
        return exit_error;
      }
      return exit_clean;
    }
  } catch (const Error &e) {
    err << "error: " << e.error_class() << ": " << e.what() << '\n';
    return exit_error;
  } catch (const detail::InputError &e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_error;
}

} // namespace minibee::cli
