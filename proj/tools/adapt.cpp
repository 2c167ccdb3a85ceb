// Batch front end: parsing, classification, exploration, encodings and the
// two adaptation decision procedures.
//
// Exit codes: 0 property holds / success, 1 property violated, 2 error or
// inconclusive.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adapt/petri.hpp"
#include "adapt/syntax.hpp"

using json = nlohmann::ordered_json;
using namespace adapt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TermPtr load_process(const std::string& path) { return parse_process(slurp(path)); }

struct ClusterArgs {
  std::string process;
  std::vector<std::string> mods;
  std::string cluster_file;
};

void add_cluster_options(CLI::App* cmd, ClusterArgs& args) {
  cmd->add_option("--process", args.process, "initial process (.adapt)");
  cmd->add_option("--mods", args.mods, "modification processes (.adapt)");
  cmd->add_option("--cluster", args.cluster_file,
                  "cluster file with 'process:' and 'mods:' lines");
}

// .cluster format: "process: <path>" and optional "mods: <path>[, <path>...]"
Cluster load_cluster(const ClusterArgs& args) {
  std::string process = args.process;
  std::vector<std::string> mods = args.mods;
  if (!args.cluster_file.empty()) {
    std::istringstream ss(slurp(args.cluster_file));
    std::string line;
    auto base = args.cluster_file.find_last_of('/') == std::string::npos
                    ? std::string()
                    : args.cluster_file.substr(0, args.cluster_file.find_last_of('/') + 1);
    auto resolve = [&base](std::string p) {
      auto from = p.find_first_not_of(" \t");
      auto to = p.find_last_not_of(" \t");
      p = from == std::string::npos ? "" : p.substr(from, to - from + 1);
      if (p.empty() || p[0] == '/') return p;
      return base + p;
    };
    while (std::getline(ss, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(0, colon), rest = line.substr(colon + 1);
      if (key == "process") {
        process = resolve(rest);
      } else if (key == "mods") {
        std::istringstream ms(rest);
        std::string item;
        while (std::getline(ms, item, ',')) {
          auto r = resolve(item);
          if (!r.empty()) mods.push_back(r);
        }
      }
    }
  }
  if (process.empty()) throw std::runtime_error("no initial process given");
  Cluster c;
  c.initial = load_process(process);
  for (auto& m : mods) c.mods.push_back(load_process(m));
  return c;
}

Act parse_barb(const std::string& s) {
  if (s.empty()) throw std::runtime_error("empty barb");
  if (s.back() == '!') return act_out(s.substr(0, s.size() - 1));
  return act_in(s);
}

json trace_json(const std::vector<TermPtr>& trace) {
  json a = json::array();
  for (auto& t : trace) a.push_back(render(t));
  return a;
}

json verdict_json(const std::string& problem, const Verdict& v) {
  json j;
  j["problem"] = problem;
  switch (v.kind) {
    case VerdictKind::Holds: j["verdict"] = "holds"; break;
    case VerdictKind::Violated: j["verdict"] = "violated"; break;
    case VerdictKind::Inconclusive: j["verdict"] = "inconclusive"; break;
  }
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (v.witness) {
    json w;
    if (!v.witness->counts.empty()) w["counts"] = v.witness->counts;
    if (!v.witness->trace.empty()) w["trace"] = trace_json(v.witness->trace);
    if (!v.witness->cycle.empty()) w["cycle"] = trace_json(v.witness->cycle);
    j["witness"] = w;
  }
  return j;
}

int verdict_exit(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Holds: return 0;
    case VerdictKind::Violated: return 1;
    case VerdictKind::Inconclusive: return 2;
  }
  return 2;
}

void print_verdict(const std::string& problem, const Verdict& v, bool as_json) {
  if (as_json) {
    std::cout << verdict_json(problem, v).dump(2) << "\n";
    return;
  }
  switch (v.kind) {
    case VerdictKind::Holds: std::cout << problem << ": holds\n"; break;
    case VerdictKind::Violated: {
      std::cout << problem << ": violated\n";
      if (v.witness) {
        if (!v.witness->counts.empty()) {
          std::cout << "  counts:";
          for (long n : v.witness->counts) std::cout << " " << n;
          std::cout << "\n";
        }
        for (auto& t : v.witness->trace) std::cout << "  " << render(t) << "\n";
        if (!v.witness->cycle.empty()) {
          std::cout << "  cycle:\n";
          for (auto& t : v.witness->cycle) std::cout << "  " << render(t) << "\n";
        }
      }
      break;
    }
    case VerdictKind::Inconclusive:
      std::cout << problem << ": inconclusive (" << v.reason << ")\n";
      break;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for adaptable processes"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "parse a process and print its canonical form");
  std::string parse_file;
  cmd_parse->add_option("file", parse_file)->required();

  // classify
  auto* cmd_classify = app.add_subcommand("classify", "report topology and update-pattern class");
  std::string classify_file;
  cmd_classify->add_option("file", classify_file)->required();

  // step
  auto* cmd_step = app.add_subcommand("step", "print the one-step successors");
  std::string step_file, step_mode = "dynamic";
  cmd_step->add_option("file", step_file)->required();
  cmd_step->add_option("--mode", step_mode, "static or dynamic")->check(CLI::IsMember({"static", "dynamic"}));

  // explore
  auto* cmd_explore = app.add_subcommand("explore", "breadth-first reachable states");
  std::string explore_file, explore_mode = "dynamic";
  long explore_depth = 8;
  cmd_explore->add_option("file", explore_file)->required();
  cmd_explore->add_option("--depth", explore_depth, "exploration depth");
  cmd_explore->add_option("--mode", explore_mode)->check(CLI::IsMember({"static", "dynamic"}));

  // dyn
  auto* cmd_dyn = app.add_subcommand("dyn", "translate a static process to a dynamic one");
  ClusterArgs dyn_args;
  add_cluster_options(cmd_dyn, dyn_args);

  // ba
  auto* cmd_ba = app.add_subcommand("ba", "decide bounded adaptation");
  ClusterArgs ba_args;
  add_cluster_options(cmd_ba, ba_args);
  std::string ba_barb;
  int ba_k = 1;
  bool ba_oracle_flag = false;
  long ba_copies = 2, ba_depth = 10;
  cmd_ba->add_option("--barb", ba_barb, "barb, e.g. e or e!")->required();
  cmd_ba->add_option("--k", ba_k, "consecutive barbed states");
  cmd_ba->add_flag("--oracle", ba_oracle_flag, "use the exhaustive oracle instead");
  cmd_ba->add_option("--copy-bound", ba_copies, "oracle: copies per modification");
  cmd_ba->add_option("--depth", ba_depth, "oracle: exploration depth");

  // ea3
  auto* cmd_ea = app.add_subcommand("ea3", "decide eventual adaptation (static preserving)");
  ClusterArgs ea_args;
  add_cluster_options(cmd_ea, ea_args);
  std::string ea_barb;
  bool ea_oracle_flag = false;
  long ea_copies = 2, ea_states = 2000;
  cmd_ea->add_option("--barb", ea_barb)->required();
  cmd_ea->add_flag("--oracle", ea_oracle_flag, "use the exhaustive oracle instead");
  cmd_ea->add_option("--copy-bound", ea_copies);
  cmd_ea->add_option("--state-limit", ea_states);

  // mm
  auto* cmd_mm = app.add_subcommand("mm", "Minsky machine utilities");
  cmd_mm->require_subcommand(1);
  auto* cmd_mm_encode = cmd_mm->add_subcommand("encode", "encode a machine as a process");
  std::string mm_file;
  int mm_variant = 1;
  cmd_mm_encode->add_option("file", mm_file)->required();
  cmd_mm_encode->add_option("--variant", mm_variant)->check(CLI::Range(1, 3));
  auto* cmd_mm_run = cmd_mm->add_subcommand("run", "run a machine, printing the trace");
  std::string mm_run_file;
  long mm_fuel = 1000;
  cmd_mm_run->add_option("file", mm_run_file)->required();
  cmd_mm_run->add_option("--fuel", mm_fuel, "maximum steps");

  // pn
  auto* cmd_pn = app.add_subcommand("pn", "Petri net utilities");
  cmd_pn->require_subcommand(1);
  auto* cmd_pn_export = cmd_pn->add_subcommand("export", "translate a cluster and export the net");
  ClusterArgs pn_args;
  add_cluster_options(cmd_pn_export, pn_args);
  auto* cmd_pn_bounded = cmd_pn->add_subcommand("bounded", "decide place boundedness");
  std::string pn_net_file, pn_place;
  ClusterArgs pnb_args;
  cmd_pn_bounded->add_option("--net", pn_net_file, "net in the export format");
  add_cluster_options(cmd_pn_bounded, pnb_args);
  cmd_pn_bounded->add_option("--place", pn_place, "place identifier")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_parse) {
      auto t = load_process(parse_file);
      if (as_json) {
        json j;
        j["canonical"] = render(t);
        auto cl = classify(t);
        j["topology"] = cl.topology == Topology::Static ? "static" : "dynamic-only";
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << render(t) << "\n";
      }
      return 0;
    }
    if (*cmd_classify) {
      auto cl = classify(load_process(classify_file));
      std::string topo = cl.topology == Topology::Static ? "static" : "dynamic-only";
      std::string pat = cl.pattern == PatternClass::None ? "none"
                                                         : std::to_string(static_cast<int>(cl.pattern));
      if (as_json) {
        json j;
        j["topology"] = topo;
        j["pattern"] = pat;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "topology=" << topo << " pattern=" << pat << "\n";
      }
      return 0;
    }
    if (*cmd_step) {
      auto t = load_process(step_file);
      Mode mode = step_mode == "static" ? Mode::Static : Mode::Dynamic;
      if (as_json) {
        json steps = json::array();
        for (auto& s : labeled_transitions(canonicalize(t), mode)) {
          if (s.label.kind != LabelKind::Tau) continue;
          json e;
          e["label"] = "tau";
          e["target"] = render(s.target);
          steps.push_back(e);
        }
        std::cout << steps.dump(2) << "\n";
      } else {
        for (auto& s : successors(t, mode)) std::cout << render(s) << "\n";
      }
      return 0;
    }
    if (*cmd_explore) {
      auto t = load_process(explore_file);
      Mode mode = explore_mode == "static" ? Mode::Static : Mode::Dynamic;
      Graph g = explore(t, mode, explore_depth);
      if (as_json) {
        json j;
        j["states"] = json::array();
        for (auto& s : g.states) j["states"].push_back(render(s));
        j["closed"] = g.closed;
        std::cout << j.dump(2) << "\n";
      } else {
        for (auto& s : g.states) std::cout << render(s) << "\n";
        std::cerr << g.states.size() << " states, " << (g.closed ? "closed" : "truncated") << "\n";
      }
      return 0;
    }
    if (*cmd_dyn) {
      Cluster c = load_cluster(dyn_args);
      Cluster d = dyn_cluster(c);
      if (as_json) {
        json j;
        j["process"] = render(d.initial);
        j["mods"] = json::array();
        for (auto& m : d.mods) j["mods"].push_back(render(m));
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << render(d.initial) << "\n";
        for (auto& m : d.mods) std::cout << render(m) << "\n";
      }
      return 0;
    }
    if (*cmd_ba) {
      Cluster c = load_cluster(ba_args);
      Act alpha = parse_barb(ba_barb);
      Verdict v = ba_oracle_flag ? ba_oracle(c, alpha, ba_k, ba_copies, ba_depth)
                                 : decide_ba(c, alpha, ba_k);
      print_verdict("bounded-adaptation", v, as_json);
      return verdict_exit(v);
    }
    if (*cmd_ea) {
      Cluster c = load_cluster(ea_args);
      Act alpha = parse_barb(ea_barb);
      Verdict v = ea_oracle_flag ? ea_oracle(c, alpha, ea_copies, ea_states, Mode::Static)
                                 : decide_ea3(c, alpha);
      print_verdict("eventual-adaptation", v, as_json);
      return verdict_exit(v);
    }
    if (*cmd_mm_encode) {
      auto m = parse_mm(slurp(mm_file));
      std::cout << render(encode_mm(m, mm_variant)) << "\n";
      return 0;
    }
    if (*cmd_mm_run) {
      auto m = parse_mm(slurp(mm_run_file));
      auto trace = mm_run(m, mm_fuel);
      for (auto& c : trace)
        std::cout << "(" << c.pc << ", " << c.m0 << ", " << c.m1 << ")\n";
      const Config& last = trace.back();
      if (m.at(last.pc).op == Op::Halt) std::cout << "halted\n";
      else std::cout << "fuel exhausted\n";
      return 0;
    }
    if (*cmd_pn_export) {
      Cluster c = load_cluster(pn_args);
      std::cout << export_net(translate(c));
      return 0;
    }
    if (*cmd_pn_bounded) {
      PetriNet net;
      if (!pn_net_file.empty()) {
        net = parse_net(slurp(pn_net_file));
      } else {
        net = translate(load_cluster(pnb_args));
      }
      int place = net.find_place(pn_place);
      if (place < 0) throw std::runtime_error("no place named '" + pn_place + "'");
      bool bounded = place_bounded(net, place);
      if (as_json) {
        json j;
        j["place"] = pn_place;
        j["bounded"] = bounded;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << pn_place << ": " << (bounded ? "bounded" : "unbounded") << "\n";
      }
      return bounded ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
