#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "acceptance.hpp"
#include "llx/extract.hpp"
#include "llx/ltg.hpp"
#include "llx/productivity.hpp"
#include "llx/syntax.hpp"
#include "llx/unfold.hpp"

namespace llx::cli {

namespace {

const char* const kGrammar =
    "term grammar:\n"
    "  term   := lam | app\n"
    "  lam    := (\\ | λ) ident+ . term\n"
    "  app    := atom atom*\n"
    "  atom   := ident | ( term ) | letrec bind (, bind)* in term\n"
    "  bind   := ident = term\n"
    "  ident  := [A-Za-z][A-Za-z0-9_']*      # comments run to end of line\n"
    "scheme files:\n"
    "  def NAME(ident, ...) = term ;   (repeated, call arguments are variables)\n"
    "  main = term\n";

struct Config {
  int depth = 8;
  int bound = 10000;
  std::string strategy = "eager-reg-plus";
  std::string format = "text";
  std::uint64_t seed = 0;
  bool allow_holes = false;
};

struct Input {
  std::string path;
  std::optional<Scheme> scheme;
  NTerm named;  // terms only
  Term term;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Input load(const std::string& path, const Config& cfg) {
  Input in;
  in.path = path;
  std::string src = read_file(path);
  if (looks_like_scheme(src)) {
    in.scheme = parse_scheme(src);
  } else {
    in.named = parse_term(src, ParseOptions{cfg.allow_holes});
    in.term = to_canonical(in.named);
  }
  return in;
}

// Plain terms are wrapped as a scheme without definitions.
Scheme as_scheme(const std::string& path) {
  std::string src = read_file(path);
  if (looks_like_scheme(src)) return parse_scheme(src);
  parse_term(src);  // report term syntax errors against the term grammar
  return parse_scheme("main = " + src);
}

Ltg graph_of(const Input& in, StrategyKind k, int bound) {
  return in.scheme ? build_ltg(*in.scheme, k, bound) : build_ltg(in.term, k, bound);
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

std::string labels(const std::vector<DecompLabel>& ls) {
  std::vector<std::string> xs;
  for (const auto& l : ls) xs.push_back(l.str());
  return join(xs, " ");
}

int cmd_check(const Input& in, std::ostream& out) {
  if (in.scheme) {
    out << "OK scheme with " << in.scheme->defs.size() << " definition(s)\n";
    for (const auto& d : in.scheme->defs) {
      out << "  " << d.name << "(" << join(d.params, ", ") << ") used:";
      for (bool b : in.scheme->used_mask.at(d.name)) out << (b ? " yes" : " no");
      out << "\n";
    }
    out << "  main = " << print_term(in.scheme->main) << "\n";
    return 0;
  }
  out << "OK " << print_term(in.named) << "\n";
  return 0;
}

int cmd_unfold(const Input& in, const Config& cfg, bool bottom, bool trace, std::ostream& out) {
  if (in.scheme) {
    out << print_term(readback_depth(build_ltg(*in.scheme, StrategyKind::EagerRegPlus, cfg.bound), cfg.depth))
        << "\n";
    return 0;
  }
  std::vector<std::string> lines;
  UnfoldOptions opt;
  opt.seed = cfg.seed;
  opt.trace = trace ? &lines : nullptr;
  Term r = bottom ? partial_unfold_to_depth(in.term, cfg.depth, opt) : unfold_to_depth(in.term, cfg.depth, opt);
  for (const auto& l : lines) out << l << "\n";
  out << print_term(r) << "\n";
  return 0;
}

int cmd_productive(const Input& in, const Config& cfg, std::ostream& out) {
  if (in.scheme) {
    ExploreOptions opt;
    opt.bound = cfg.bound;
    opt.with_origin = false;
    try {
      generated_subterms(*in.scheme, StrategyKind::EagerRegPlus, opt);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Unproductive) throw;
      out << "UNPRODUCTIVE\n  " << e.what() << "\n";
      return 1;
    }
    out << "PRODUCTIVE\n";
    return 0;
  }
  ProductivityResult r = is_productive(in.term);
  if (r.productive) {
    out << "PRODUCTIVE\n";
    return 0;
  }
  out << "UNPRODUCTIVE\n";
  out << "  cycle: " << join(r.cycle_labels, " -> ") << "\n";
  if (r.bottom_at) out << "  stagnates at: " << r.bottom_at->str() << "\n";
  if (r.root_cycle) {
    std::vector<std::string> rs;
    for (auto rule : r.root_cycle->rules) rs.push_back(rule_name(rule));
    out << "  root steps: " << join(rs, ", ") << "\n";
    out << "  from: " << print_term(r.root_cycle->entry) << "\n";
  }
  return 1;
}

int cmd_equal(const Input& a, const Input& b, const Config& cfg, std::ostream& out) {
  Bisimulation r = bisimilar(graph_of(a, StrategyKind::EagerRegPlus, cfg.bound),
                             graph_of(b, StrategyKind::EagerRegPlus, cfg.bound));
  if (r.equal) {
    out << "EQUAL\n";
    return 0;
  }
  out << "DISTINGUISHED\n";
  out << "  path: " << (r.trace.empty() ? std::string("(start)") : join(r.trace, " ")) << "\n";
  out << "  mismatch: " << r.mismatch << "\n";
  return 1;
}

int cmd_graph(const Input& in, const Config& cfg, std::ostream& out) {
  Ltg g = graph_of(in, parse_strategy(cfg.strategy), cfg.bound);
  if (cfg.format == "dot") {
    out << to_dot(g);
  } else if (cfg.format == "json") {
    out << to_json(g) << "\n";
  } else {
    out << "states " << g.size() << ", start " << g.start << "\n";
    for (int s = 0; s < g.size(); ++s) {
      out << "  " << s << " " << kind_name(g.kind[s]);
      for (int x : g.next[s])
        if (x >= 0) out << " " << x;
      if (s < static_cast<int>(g.text.size()) && !g.text[s].empty()) out << "  " << g.text[s];
      out << "\n";
    }
  }
  return 0;
}

int cmd_chains(const Input& in, const Config& cfg, int max_len, std::ostream& out) {
  ChainReport r = in.scheme ? chains(*in.scheme, max_len, cfg.bound) : chains(in.term, max_len, cfg.bound);
  if (r.infinite) {
    out << "infinite binding-capturing chains\n";
    if (r.witness)
      out << "  pump: " << r.witness->first_text << " ~> " << r.witness->second_text << " via "
          << labels(r.witness->path) << "\n";
  } else if (r.capped) {
    out << "max finite length >= " << r.max_finite_length << " (exploration capped)\n";
  } else {
    out << "max finite length " << r.max_finite_length << "\n";
  }
  if (!r.sample_chain.empty()) out << "  chain: " << format_chain(r.sample_chain) << "\n";
  return 0;
}

int cmd_classify(const Scheme& s, const Config& cfg, std::ostream& out) {
  Classification c = classify(s, cfg.bound);
  out << classification_name(c.kind);
  switch (c.kind) {
    case Classification::StronglyRegular:
      out << " (" << c.graph_size << " states)\n";
      break;
    case Classification::RegularNotStrong:
      out << "\n  pump: " << c.witness->first_text << " ~> " << c.witness->second_text << " (prefix "
          << c.witness->n1 << " -> " << c.witness->n2 << ") via " << labels(c.witness->path) << "\n";
      break;
    case Classification::Unknown:
      out << " (bound " << c.bound_hit << " reached)\n";
      break;
  }
  out << "  eager-reg exploration: ";
  if (c.eager_reg_finite)
    out << "finite, " << c.eager_reg_states << " states\n";
  else
    out << "not finite within the bound\n";
  switch (c.kind) {
    case Classification::StronglyRegular: return 0;
    case Classification::RegularNotStrong: return 1;
    default: return 2;
  }
}

int cmd_canonicalize(const Input& in, const Config& cfg, std::ostream& out) {
  if (in.scheme) {
    out << print_term(extract_letrec(minimize(build_ltg(*in.scheme, StrategyKind::EagerRegPlus, cfg.bound))))
        << "\n";
    return 0;
  }
  out << print_term(canonicalize(in.term, cfg.bound)) << "\n";
  return 0;
}

int cmd_corpus(const std::string& dir, std::ostream& out) {
  int failed = 0;
  acceptance::run(dir, {}, [&](const acceptance::Outcome& o) {
    out << acceptance::format(o) << "\n" << std::flush;
    failed += !o.pass;
  });
  out << (failed ? "FAILED " + std::to_string(failed) + " criteria\n" : std::string("all criteria passed\n"));
  return failed ? 1 : 0;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

std::string labelled(const std::string& label, const std::string& msg) {
  return msg.rfind(label, 0) == 0 ? one_line(msg) : label + ": " + one_line(msg);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"llx: analyses for lambda-letrec terms and higher-order recursion schemes"};
  app.footer(kGrammar);
  app.require_subcommand(1);
  app.add_option("--seed", cfg.seed, "scheduler seed for unfolding");
  auto* bound_opt = app.add_option("--bound", cfg.bound, "state bound for explorations")->check(CLI::PositiveNumber);
  app.add_flag("--allow-holes", cfg.allow_holes, "accept _ and ! in input terms");

  std::string file, file2, dir;
  bool bottom = false, trace = false;
  int max_len = 8;

  auto* check = app.add_subcommand("check", "parse and validate");
  check->add_option("FILE", file)->required();

  auto* unfold = app.add_subcommand("unfold", "depth-bounded unfolding");
  unfold->add_option("FILE", file)->required();
  unfold->add_option("--depth", cfg.depth, "truncation depth")->check(CLI::NonNegativeNumber);
  unfold->add_flag("--bottom", bottom, "replace stagnating subterms by !");
  unfold->add_flag("--trace", trace, "print every rewrite step");

  auto* productive = app.add_subcommand("productive", "productivity check");
  productive->add_option("FILE", file)->required();

  auto* equal = app.add_subcommand("equal", "compare the denoted infinite terms");
  equal->add_option("A", file)->required();
  equal->add_option("B", file2)->required();

  auto* graph = app.add_subcommand("graph", "lambda-transition graph");
  graph->add_option("FILE", file)->required();
  graph->add_option("--strategy", cfg.strategy, "eager-reg-plus | lazy-reg-plus | eager-reg | lazy-reg");
  graph->add_option("--format", cfg.format, "text | dot | json")
      ->check(CLI::IsMember({"text", "dot", "json"}));

  auto* chain = app.add_subcommand("chains", "binding-capturing chains");
  chain->add_option("FILE", file)->required();
  chain->add_option("--max", max_len, "longest chain to search for")->check(CLI::PositiveNumber);

  auto* cls = app.add_subcommand("classify", "strong regularity of a scheme");
  cls->add_option("SCHEME", file)->required();

  auto* canon = app.add_subcommand("canonicalize", "letrec form read off the minimal graph");
  canon->add_option("FILE", file)->required();

  auto* corpus = app.add_subcommand("corpus", "run the acceptance suite");
  corpus->add_option("DIR", dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << one_line(e.what()) << "\n" << app.help() << std::flush;
    return 2;
  }

  try {
    if (bound_opt->count() == 0)
      if (const char* env = std::getenv("LLX_BOUND")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 100000000)
          throw Error(ErrorKind::Usage, std::string("LLX_BOUND must be a positive integer, got '") + env + "'");
        cfg.bound = static_cast<int>(v);
      }
    parse_strategy(cfg.strategy);

    if (*check) return cmd_check(load(file, cfg), out);
    if (*unfold) return cmd_unfold(load(file, cfg), cfg, bottom, trace, out);
    if (*productive) return cmd_productive(load(file, cfg), cfg, out);
    if (*equal) return cmd_equal(load(file, cfg), load(file2, cfg), cfg, out);
    if (*graph) return cmd_graph(load(file, cfg), cfg, out);
    if (*chain) return cmd_chains(load(file, cfg), cfg, max_len, out);
    if (*cls) return cmd_classify(as_scheme(file), cfg, out);
    if (*canon) return cmd_canonicalize(load(file, cfg), cfg, out);
    if (*corpus) return cmd_corpus(dir, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Unproductive) {
      err << labelled("unproductive", e.what()) << "\n";
      return 1;
    }
    if (e.kind() == ErrorKind::NotStronglyRegular) {
      err << labelled("not strongly regular", e.what()) << "\n";
      return 1;
    }
    err << "error: " << error_kind_name(e.kind()) << ": " << one_line(e.what()) << "\n";
    if (e.kind() == ErrorKind::Usage) err << kGrammar;
    return 2;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << "\n";
    return 2;
  }
  return 2;
}

}  // namespace llx::cli
