#include "prxml/cli.hpp"

#include <cctype>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prxml/algorithms.hpp"
#include "prxml/errors.hpp"
#include "prxml/format.hpp"
#include "prxml/gen.hpp"
#include "prxml/matches.hpp"
#include "prxml/oracle.hpp"
#include "prxml/rewrite.hpp"
#include "prxml/selftest.hpp"

namespace prxml {

namespace {

PDocument load_doc(const std::string& path) { return parse_prxml(read_text_file(path)); }
XDocument load_world(const std::string& path) { return parse_xml(read_text_file(path)); }

std::string prob_line(const Rational& r) { return r.str() + " (= " + r.approx_str() + ")"; }

// PRXML_CAP overrides the built-in configuration cap; an explicit --cap
// still wins over both.
unsigned long long default_cap() {
  if (const char* s = std::getenv("PRXML_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultConfigCap;
}

bool looks_like_world(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else {
      break;
    }
  }
  return text.compare(i, 4, "(xml") == 0;
}

int cmd_validate(const std::string& path) {
  std::string text = read_text_file(path);
  try {
    if (looks_like_world(text)) {
      XDocument w = parse_xml(text);
      std::cout << "valid world: " << w.size() << (w.size() == 1 ? " node, " : " nodes, ")
                << (w.ordered ? "ordered" : "unordered") << "\n";
    } else {
      PDocument d = parse_prxml(text);
      ClassProfile profile = classify(d);
      std::size_t ne = d.events.events.size();
      std::cout << "valid document: " << d.size() << (d.size() == 1 ? " node, " : " nodes, ")
                << ne << (ne == 1 ? " event, " : " events, ")
                << (d.ordered ? "ordered" : "unordered") << ", kinds:";
      if (profile.used.empty()) std::cout << " none";
      for (NodeKind k : profile.used) std::cout << ' ' << kind_name(k);
      std::cout << "\n";
    }
  } catch (const SyntaxError& e) {
    std::cout << "invalid: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cout << "invalid: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_worlds(const std::string& path, unsigned long long cap) {
  PDocument d = load_doc(path);
  WorldDistribution dist = enumerate_worlds(d, cap);
  for (const auto& [key, entry] : dist.worlds)
    std::cout << entry.prob.str() << "\t" << serialize_compact(entry.repr) << "\n";
  std::cout << dist.worlds.size() << " worlds, total " << dist.total().str() << "\n";
  return 0;
}

int cmd_poss(const std::string& dpath, const std::string& wpath, const std::string& algo,
             bool relaxed, unsigned long long cap) {
  PDocument d = load_doc(dpath);
  XDocument w = load_world(wpath);

  std::string choice = algo;
  if (choice == "auto") {
    ClassProfile profile = classify(d);
    bool local = profile.uses_only({NodeKind::Mux, NodeKind::Ind, NodeKind::Det});
    if (local && d.ordered && w.ordered) {
      choice = "ordered-dp";
    } else if (!d.ordered && !w.ordered && profile.uses_only({NodeKind::Mux, NodeKind::Ind}) &&
               profile.no_ind_under_mux && (profile.used.size() <= 1 || relaxed)) {
      choice = "unordered-single";
    } else {
      choice = "oracle";
    }
  }

  bool possible;
  if (choice == "ordered-dp")
    possible = !prob_ordered_local(d, w).is_zero();
  else if (choice == "unordered-single")
    possible = poss_unordered_single(d, w, relaxed);
  else
    possible = !world_probability_bf(d, w, cap).is_zero();

  std::cout << (possible ? "possible" : "not a possible world") << "\n";
  return possible ? 0 : 1;
}

int cmd_prob(const std::string& dpath, const std::string& wpath, const std::string& algo,
             unsigned long long cap) {
  PDocument d = load_doc(dpath);
  XDocument w = load_world(wpath);

  std::string choice = algo;
  if (choice == "auto") {
    bool local = classify(d).uses_only({NodeKind::Mux, NodeKind::Ind, NodeKind::Det});
    choice = local && d.ordered && w.ordered ? "ordered-dp" : "oracle";
  }
  Rational p = choice == "ordered-dp" ? prob_ordered_local(d, w) : world_probability_bf(d, w, cap);
  std::cout << prob_line(p) << "\n";
  return 0;
}

int cmd_matches(const std::string& dpath, const std::string& wpath, unsigned long long cap,
                const std::string& emit) {
  PDocument d = load_doc(dpath);
  XDocument w = load_world(wpath);
  std::vector<CandidateMatch> ms = enumerate_matches(d, w, cap);
  std::cout << ms.size() << (ms.size() == 1 ? " candidate match\n" : " candidate matches\n");
  for (const CandidateMatch& f : ms) {
    bool first = true;
    for (auto [wid, did] : f) {
      std::cout << (first ? "" : " ") << wid << "->" << did;
      first = false;
    }
    std::cout << "\n";
  }
  if (!emit.empty()) write_text_file(emit, serialize_matches(ms));
  return 0;
}

int cmd_eposs(const std::string& dpath, const std::string& wpath, const std::string& mpath,
              const std::string& algo, unsigned long long cap) {
  PDocument d = load_doc(dpath);
  XDocument w = load_world(wpath);
  std::vector<CandidateMatch> ms =
      mpath.empty() ? enumerate_matches(d, w) : parse_matches(read_text_file(mpath));

  std::string choice = algo;
  if (choice.empty()) {
    ClassProfile profile = classify(d);
    if (profile.uses_only({NodeKind::Mux, NodeKind::Ind, NodeKind::Det}))
      choice = "local";
    else if (profile.uses_only({NodeKind::Mie}))
      choice = "mie";
    else
      choice = "oracle";
  }

  Rational p;
  if (choice == "local")
    p = prob_explicit_local(d, w, ms);
  else if (choice == "mie")
    p = prob_explicit_mie(d, w, ms);
  else
    p = prob_explicit_oracle(d, w, ms, cap);
  std::cout << prob_line(p) << "\n";
  return 0;
}

int cmd_rewrite(const std::string& path, const std::string& target, const std::string& out) {
  PDocument d = load_doc(path);
  PDocument result;
  if (target == "flat-mux") {
    result = flatten_mux(d);
  } else if (target == "mie") {
    result = mux_to_mie(d);
  } else {  // cie: from mie directly, or from mux via the mie step
    result = classify(d).uses_only({NodeKind::Mie}) ? mie_to_cie(d) : mie_to_cie(mux_to_mie(d));
  }
  std::string text = serialize(result);
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
  return 0;
}

int cmd_gen(const std::string& kind, const std::string& in, const std::string& out) {
  std::string text = read_text_file(in);
  std::pair<PDocument, XDocument> pair;
  if (kind == "sat-cie")
    pair = gen_sat_cie(parse_dimacs(text));
  else if (kind == "sat-muxind")
    pair = gen_sat_muxind(parse_dimacs(text));
  else if (kind == "xc-inddet")
    pair = gen_xc_inddet(parse_set_lines(text));
  else if (kind == "xc-muxdet")
    pair = gen_xc_muxdet(parse_set_lines(text));
  else if (kind == "xc-mie")
    pair = gen_xc_mie(parse_set_lines(text));
  else if (kind == "pm-ind")
    pair = gen_pm_ind(parse_edge_list(text));
  else
    pair = gen_pm_mux(parse_edge_list(text));
  write_text_file(out + ".prxml", serialize(pair.first));
  write_text_file(out + ".xml.sexp", serialize(pair.second));
  std::cout << "wrote " << out << ".prxml and " << out << ".xml.sexp\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"probabilistic XML documents: possible-world probabilities, "
               "possibility checks, rewritings, and reduction gadgets"};
  app.require_subcommand(1);
  unsigned long long cap = default_cap();

  std::string v_path;
  CLI::App* validate = app.add_subcommand("validate", "check a document or world file");
  validate->add_option("file", v_path, "document (.prxml) or world (.xml.sexp)")->required();

  std::string w_path;
  unsigned long long w_cap = cap;
  CLI::App* worlds = app.add_subcommand("worlds", "enumerate all possible worlds");
  worlds->add_option("doc", w_path, "document file")->required();
  worlds->add_option("--cap", w_cap, "configuration cap");

  std::string p_doc, p_world, p_algo = "auto";
  bool p_relaxed = false;
  unsigned long long p_cap = cap;
  CLI::App* poss = app.add_subcommand("poss", "decide whether the world is possible");
  poss->add_option("doc", p_doc, "document file")->required();
  poss->add_option("world", p_world, "world file")->required();
  poss->add_option("--algo", p_algo, "auto|oracle|unordered-single|ordered-dp")
      ->check(CLI::IsMember({"auto", "oracle", "unordered-single", "ordered-dp"}));
  poss->add_flag("--relaxed", p_relaxed, "allow mux and ind together (no ind under mux)");
  poss->add_option("--cap", p_cap, "configuration cap");

  std::string pr_doc, pr_world, pr_algo = "auto";
  unsigned long long pr_cap = cap;
  CLI::App* prob = app.add_subcommand("prob", "compute the world's probability");
  prob->add_option("doc", pr_doc, "document file")->required();
  prob->add_option("world", pr_world, "world file")->required();
  prob->add_option("--algo", pr_algo, "auto|oracle|ordered-dp")
      ->check(CLI::IsMember({"auto", "oracle", "ordered-dp"}));
  prob->add_option("--cap", pr_cap, "configuration cap");

  std::string m_doc, m_world, m_emit;
  unsigned long long m_cap = kDefaultMatchCap;
  CLI::App* matches = app.add_subcommand("matches", "enumerate candidate matches");
  matches->add_option("doc", m_doc, "document file")->required();
  matches->add_option("world", m_world, "world file")->required();
  matches->add_option("--cap", m_cap, "match cap");
  matches->add_option("--emit", m_emit, "write a .matches file");

  std::string e_doc, e_world, e_matches, e_algo;
  unsigned long long e_cap = cap;
  CLI::App* eposs = app.add_subcommand("eposs", "probability from explicit candidate matches");
  eposs->add_option("doc", e_doc, "document file")->required();
  eposs->add_option("world", e_world, "world file")->required();
  eposs->add_option("--matches", e_matches, ".matches file (default: enumerate)");
  eposs->add_option("--algo", e_algo, "local|mie|oracle (default: by document class)")
      ->check(CLI::IsMember({"local", "mie", "oracle"}));
  eposs->add_option("--cap", e_cap, "configuration cap (oracle variant)");

  std::string r_path, r_to, r_out;
  CLI::App* rewrite = app.add_subcommand("rewrite", "rewrite between document classes");
  rewrite->add_option("doc", r_path, "document file")->required();
  rewrite->add_option("--to", r_to, "flat-mux|mie|cie")
      ->required()
      ->check(CLI::IsMember({"flat-mux", "mie", "cie"}));
  rewrite->add_option("-o,--out", r_out, "output file (default: stdout)");

  std::string g_kind, g_in, g_out;
  CLI::App* gen = app.add_subcommand("gen", "build a reduction gadget from an instance file");
  gen->add_option("kind", g_kind, "gadget kind")
      ->required()
      ->check(CLI::IsMember(
          {"sat-cie", "sat-muxind", "xc-inddet", "xc-muxdet", "xc-mie", "pm-ind", "pm-mux"}));
  gen->add_option("in", g_in, "instance file (DIMACS, set lines, or edge list)")->required();
  gen->add_option("out", g_out, "output basename")->required();

  unsigned long long s_seed = 1;
  CLI::App* selftest = app.add_subcommand("selftest", "randomized cross-checks of all algorithms");
  selftest->add_option("--seed", s_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(v_path);
    if (worlds->parsed()) return cmd_worlds(w_path, w_cap);
    if (poss->parsed()) return cmd_poss(p_doc, p_world, p_algo, p_relaxed, p_cap);
    if (prob->parsed()) return cmd_prob(pr_doc, pr_world, pr_algo, pr_cap);
    if (matches->parsed()) return cmd_matches(m_doc, m_world, m_cap, m_emit);
    if (eposs->parsed()) return cmd_eposs(e_doc, e_world, e_matches, e_algo, e_cap);
    if (rewrite->parsed()) return cmd_rewrite(r_path, r_to, r_out);
    if (gen->parsed()) return cmd_gen(g_kind, g_in, g_out);
    if (selftest->parsed()) return run_selftest(s_seed, std::cout) ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace prxml
