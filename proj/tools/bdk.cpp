// bdk: command-line front end for the Bratteli diagram toolkit.

#include "bdk/bdk.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace bdk;

struct Opts {
  std::string file, dvectors, levels, path, element, set, out, from, to_path;
  std::string format = "json";
  std::size_t level = 0, depth = 3, lookahead = 16, budget = 10, steps = 1, to = 0;
  long long norm = -1;
  bool ordered = false, strict = false, inverse = false, backward = false, aperiodic = false;
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_for(Verdict v, bool strict) {
  switch (v) {
    case Verdict::Holds: return 0;
    case Verdict::Fails: return 1;
    case Verdict::Unknown: return strict ? 1 : 3;
  }
  return 1;
}

void emit(const Opts& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Usage("cannot write " + o.out);
  f << text;
}

std::string render(const Opts& o, const json& j) {
  if (o.format == "dot") throw Usage("--format dot is only available for graphs");
  return j.dump(2) + "\n";
}

std::string render_report(const Opts& o, const Report& r, json extra = json::object()) {
  if (o.format == "text") {
    std::ostringstream os;
    for (const auto& p : r.results)
      os << p.property << ": " << to_string(p.verdict) << (p.required ? "" : " (informational)") << "\n";
    for (const auto& f : r.findings) os << "finding: " << f << "\n";
    os << "verdict: " << to_string(r.overall()) << "\n";
    return os.str();
  }
  json j = r.to_json();
  for (auto& [k, v] : extra.items()) j[k] = v;
  return render(o, j);
}

std::vector<std::size_t> parse_levels(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoul(tok));
    } catch (const std::exception&) {
      throw Usage("--levels: not a level number: " + tok);
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

json json_arg(const std::string& s) {
  std::string text = !s.empty() && s[0] == '@' ? read_file(s.substr(1)) : s;
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON argument: ") + e.what());
  }
}

int cmd_validate(const Opts& o) {
  Diagram d = load_diagram(o.file);
  Report r = o.ordered ? validate_ordered(d, o.budget) : validate_unordered(d, o.budget);
  emit(o, render_report(o, r));
  return exit_for(r.overall(), o.strict);
}

int cmd_telescope(const Opts& o) {
  Diagram d = load_diagram(o.file);
  Diagram t = o.levels.empty() ? shorten_telescope(d, o.aperiodic) : telescope(d, parse_levels(o.levels));
  emit(o, render(o, to_json(t)));
  return 0;
}

int cmd_towers(const Opts& o) {
  Diagram d = load_diagram(o.file);
  ExtremePaths ex = extreme_paths(d);
  std::size_t n = o.level ? o.level : 1;
  KRPartition kr = towers(d, ex, n);
  json j = {{"level", n}, {"towers", json::array()}};
  for (std::size_t v = 0; v < kr.towers.size(); ++v) {
    json floors = json::array();
    for (const auto& p : kr.towers[v]) floors.push_back(encode_path(d, p));
    j["towers"].push_back({{"vertex", d.name(n, v)}, {"height", int_json(kr.heights[v])}, {"floors", floors}});
  }
  if (d.has_level(n + 1)) j["traversal"] = to_json(traversal_matrix(d, ex, n));
  emit(o, render(o, j));
  return 0;
}

int cmd_orbit(const Opts& o) {
  Diagram d = load_diagram(o.file);
  ExtremePaths ex = extreme_paths(d);
  if (o.path.empty()) throw Usage("orbit: --path is required");
  std::set<FinitePath> cur{decode_path(d, o.path)};
  json j = {{"start", o.path}, {"direction", o.inverse ? "backward" : "forward"}, {"steps", json::array()}};
  Verdict v = Verdict::Holds;
  for (std::size_t s = 1; s <= o.steps; ++s) {
    std::set<FinitePath> next;
    for (const auto& p : cur) {
      StepResult r = o.inverse ? inverse_step(d, ex, p, o.lookahead) : vershik_step(d, ex, p, o.lookahead);
      if (r.exhausted || r.flagged) v = Verdict::Unknown;
      next.insert(r.images.begin(), r.images.end());
    }
    json ps = json::array();
    for (const auto& p : next) ps.push_back(encode_path(d, p));
    j["steps"].push_back({{"step", s}, {"paths", ps}});
    cur = next;
  }
  j["verdict"] = to_string(v);
  emit(o, render(o, j));
  return exit_for(v, o.strict);
}

int cmd_transition_graphs(const Opts& o) {
  Diagram d = load_diagram(o.file);
  bool non_el = validate_unordered(d, o.budget).verdict("non_elementary") == Verdict::Holds;
  std::vector<std::size_t> levels = o.level ? std::vector<std::size_t>{o.level} : index_levels(d);
  if (levels.empty()) throw std::domain_error("markers never resolve on the available levels");
  Report rep;
  json gs = json::array();
  std::string dot;
  for (auto n : levels) {
    TransitionGraph g = transition_graph(d, n);
    Report r = check_structure(g, non_el);
    for (auto& p : r.results) p.property = "L" + std::to_string(n) + "." + p.property;
    rep.merge(r);
    gs.push_back(to_json(g));
    dot += to_dot(g);
  }
  if (o.format == "dot") emit(o, dot);
  else emit(o, render_report(o, rep, {{"graphs", gs}}));
  return exit_for(rep.overall(), o.strict);
}

int cmd_index(const Opts& o) {
  Diagram d = load_diagram(o.file);
  std::size_t n = o.level;
  if (!n) {
    auto L = marker_level(d);
    if (!L) throw std::domain_error("markers never resolve on the available levels");
    n = *L;
  }
  IndexSet s = index_elements(d, n);
  json j = to_json(d, s);
  Vec sum(s.vertices.size());
  for (const auto& x : s.d) sum = sum + x.vector;
  j["sum"] = to_json(sum);
  emit(o, render(o, j));
  return is_zero(sum) ? 0 : 1;
}

int cmd_check_index(const Opts& o) {
  Diagram d = load_diagram(o.file);
  Report r = check_index_relations(d, o.budget);
  emit(o, render_report(o, r));
  return exit_for(r.overall(), o.strict);
}

int cmd_synthesize(const Opts& o) {
  Diagram d = load_diagram(o.file);
  if (o.dvectors.empty()) throw Usage("synthesize: --d is required");
  DVectors dv;
  try {
    dv = dvectors_from_json(d, json::parse(read_file(o.dvectors)));
  } catch (const json::parse_error& e) {
    throw ParseError(o.dvectors + ": malformed JSON: " + e.what());
  }
  Synthesis s = synthesize_order(d, dv, o.strict);
  emit(o, render(o, to_json(s.diagram)));
  std::cerr << s.report.to_json().dump() << "\n";
  return exit_for(s.report.overall(), o.strict);
}

int cmd_chain(const Opts& o) {
  Diagram d = load_diagram(o.file);
  ExtremePaths ex = extreme_paths(d);
  CylinderGraph g = cylinder_graph(d, ex, o.depth, o.lookahead);
  if (o.format == "dot") {
    emit(o, to_dot(d, g));
    return 0;
  }
  ChainVerdict cv = chain_transitive(d, g);
  Saturation sat = saturation_sets(d, g);
  json j = {{"depth", o.depth},
            {"epsilon", "2^-" + std::to_string(o.depth)},
            {"nodes", g.size()},
            {"chain_transitive", to_string(cv.verdict)},
            {"moving", to_string(cv.moving)},
            {"witness", cv.witness}};
  json e = json::array();
  for (const auto& s : sat.sets) e.push_back(s.size() == g.size() ? json("all") : node_list(d, g, s));
  j["saturation"] = e;
  j["criterion_agrees"] = to_string(sat.report.overall());
  if (!o.from.empty() || !o.to_path.empty()) {
    auto p = g.at(decode_path(d, o.from)), q = g.at(decode_path(d, o.to_path));
    auto c = epsilon_chain(g, p, q);
    j["chain"] = c ? node_list(d, g, *c) : json(nullptr);
  }
  if (!o.path.empty()) {
    auto p = g.at(decode_path(d, o.path));
    auto w = pseudo_orbit(g, p);
    j["pseudo_orbit"] = w ? node_list(d, g, *w) : json(nullptr);
  }
  emit(o, render(o, j));
  return exit_for(cv.verdict, o.strict);
}

int cmd_cover(const Opts& o) {
  Diagram d = load_diagram(o.file);
  ExtremePaths ex = extreme_paths(d);
  CylinderGraph g = cylinder_graph(d, ex, o.depth, o.lookahead);
  std::set<std::size_t> S;
  if (o.set.empty()) {
    if (ex.verdict != Verdict::Holds) throw std::domain_error("cover: no extreme paths to start from; pass --set");
    for (int i = 1; i <= d.k(); ++i)
      for (bool mx : {true, false}) S.insert(g.at(z_path(d, ex, i, mx, o.depth)));
  } else {
    for (const auto& t : split(o.set, ';')) S.insert(g.at(decode_path(d, t)));
  }
  Cover c = cover_steps(d, g, {S.begin(), S.end()}, !o.backward);
  json j = {{"depth", o.depth}, {"direction", o.backward ? "backward" : "forward"}, {"set", node_list(d, g, {S.begin(), S.end()})}};
  if (c.steps) j["steps"] = *c.steps;
  else j["diverges"] = c.reason;
  emit(o, render(o, j));
  return c.steps ? 0 : 1;
}

int cmd_kpush(const Opts& o) {
  Diagram d = load_diagram(o.file);
  if (o.element.empty()) throw Usage("kpush: --element is required");
  GroupElement x = group_element_from_json(json_arg(o.element));
  DirectLimitGroup g(d, x.group);
  std::size_t m = o.to ? o.to : x.level + 1;
  json j = {{"element", to_json(x)}, {"pushforward", to_json(g.pushforward(x, m))}};
  Decision pos = is_positive(g, x, o.budget), zero = eq(g, x, g.zero(x.level), o.budget);
  j["positive"] = to_string(pos.verdict);
  j["zero"] = to_string(zero.verdict);
  if (o.norm >= 0) j["bounded_norm"] = to_string(bounded_norm_membership(g, x, Int(o.norm), o.budget).verdict);
  emit(o, render(o, j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordered Bratteli diagrams with k minimal components"};
  app.require_subcommand(1);
  Opts o;
  auto common = [&](CLI::App* s) {
    s->add_option("file", o.file, "diagram JSON")->required();
    s->add_option("--level", o.level, "level n");
    s->add_option("--depth", o.depth, "path depth N");
    s->add_option("--lookahead", o.lookahead, "levels explored past N");
    s->add_option("--budget", o.budget, "level budget for semi-decisions")->envname("BDK_BUDGET");
    s->add_flag("--strict", o.strict, "treat Unknown as failure");
    s->add_option("--format", o.format, "json|dot|text")->check(CLI::IsMember({"json", "dot", "text"}));
    s->add_option("-o", o.out, "output file");
  };
  std::vector<std::pair<CLI::App*, int (*)(const Opts&)>> cmds;
  auto add = [&](const char* name, const char* help, int (*fn)(const Opts&)) {
    CLI::App* s = app.add_subcommand(name, help);
    common(s);
    cmds.push_back({s, fn});
    return s;
  };
  add("validate", "check k-simplicity, and with --ordered the order conditions", cmd_validate)
      ->add_flag("--ordered", o.ordered, "also check the order");
  auto* tel = add("telescope", "contract to the given levels, or shorten extreme chains", cmd_telescope);
  tel->add_option("--levels", o.levels, "comma-separated levels starting at 0");
  tel->add_flag("--aperiodic", o.aperiodic, "also require fibers with two or more edges");
  add("towers", "Kakutani-Rokhlin towers at --level", cmd_towers);
  auto* orb = add("orbit", "apply the Vershik map to --path", cmd_orbit);
  orb->add_option("--path", o.path, "encoded depth-N path");
  orb->add_option("--steps", o.steps, "number of steps");
  orb->add_flag("--inverse", o.inverse, "use the inverse map");
  add("transition-graphs", "transition graphs L_n", cmd_transition_graphs);
  add("index", "index elements d_1..d_k at --level", cmd_index);
  add("check-index", "relations among the index elements", cmd_check_index);
  add("synthesize", "build an order from d-vectors", cmd_synthesize)->add_option("--d", o.dvectors, "d-vectors JSON");
  auto* ch = add("chain", "chain transitivity at resolution 2^-depth", cmd_chain);
  ch->add_option("--from", o.from, "chain start path");
  ch->add_option("--to", o.to_path, "chain end path");
  ch->add_option("--path", o.path, "pseudo-orbit base path");
  auto* cov = add("cover", "steps for sigma-images of a set to cover", cmd_cover);
  cov->add_option("--set", o.set, "semicolon-separated paths (default: extreme paths)");
  cov->add_flag("--backward", o.backward, "iterate the inverse map");
  auto* kp = add("kpush", "push a group element forward and test it", cmd_kpush);
  kp->add_option("--element", o.element, "element JSON or @file");
  kp->add_option("--to", o.to, "target level");
  kp->add_option("--norm", o.norm, "also test the sup-norm bound m");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    for (auto& [sub, fn] : cmds)
      if (sub->parsed()) return fn(o);
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const SynthesisError& e) {
    std::cerr << "synthesis failed: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
