#pragma once

// Two-counter Minsky machines and their three encodings into the calculus,
// used as corpus generators and simulation test beds.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adapt/term.hpp"

namespace adapt {

enum class Op : uint8_t { Inc, DecJ, Halt };

struct Instr {
  Op op = Op::Halt;
  int reg = 0;     // 0 or 1
  int target = 0;  // DecJ jump target (1-based)
};

struct MinskyMachine {
  std::vector<Instr> instrs;  // instruction i lives at instrs[i-1]
  long init_r0 = 0;
  long init_r1 = 0;

  int size() const { return static_cast<int>(instrs.size()); }
  const Instr& at(int pc) const { return instrs[static_cast<size_t>(pc - 1)]; }
};

struct Config {
  int pc = 1;
  long m0 = 0;
  long m1 = 0;
  bool operator==(const Config& o) const { return pc == o.pc && m0 == o.m0 && m1 == o.m1; }
};

inline void validate_mm(const MinskyMachine& m) {
  if (m.instrs.empty()) throw std::invalid_argument("machine has no instructions");
  if (m.init_r0 < 0 || m.init_r1 < 0) throw std::invalid_argument("negative register value");
  for (size_t i = 0; i < m.instrs.size(); ++i) {
    const Instr& ins = m.instrs[i];
    if (ins.reg != 0 && ins.reg != 1) throw std::invalid_argument("register must be r0 or r1");
    if (ins.op == Op::DecJ && (ins.target < 1 || ins.target > m.size()))
      throw std::invalid_argument("improper instruction: jump target " + std::to_string(ins.target) +
                                  " outside 1.." + std::to_string(m.size()));
  }
}

// One step of Fig-style semantics; nullopt when the machine has terminated.
inline std::optional<Config> mm_step(const MinskyMachine& m, const Config& c) {
  const Instr& ins = m.at(c.pc);
  switch (ins.op) {
    case Op::Halt: return std::nullopt;
    case Op::Inc: {
      Config n = c;
      (ins.reg == 0 ? n.m0 : n.m1) += 1;
      n.pc = c.pc + 1;
      return n;
    }
    case Op::DecJ: {
      Config n = c;
      long& r = (ins.reg == 0 ? n.m0 : n.m1);
      if (r == 0) {
        n.pc = ins.target;
      } else {
        r -= 1;
        n.pc = c.pc + 1;
      }
      return n;
    }
  }
  return std::nullopt;
}

inline std::vector<Config> mm_run(const MinskyMachine& m, long fuel) {
  std::vector<Config> trace;
  Config c{1, m.init_r0, m.init_r1};
  trace.push_back(c);
  for (long i = 0; i < fuel; ++i) {
    auto n = mm_step(m, c);
    if (!n) break;
    c = *n;
    trace.push_back(c);
  }
  return trace;
}

// ---- encodings ---------------------------------------------------------------

namespace mmenc {

inline Name rname(int j) { return j == 0 ? "r0" : "r1"; }
inline Name uname(int j) { return j == 0 ? "u0" : "u1"; }
inline Name zname(int j) { return j == 0 ? "z0" : "z1"; }
inline Name cname(int j) { return j == 0 ? "c0" : "c1"; }
inline Name incname(int j) { return j == 0 ? "inc0" : "inc1"; }
inline Name pname(int i) { return "p" + std::to_string(i); }

// u_j!. ... .u_j!.z_j!  (n outputs on u_j ending in z_j!)
inline TermPtr number_v1(long n, int j) {
  TermPtr t = act(out(zname(j)), nil());
  for (long i = 0; i < n; ++i) t = act(out(uname(j)), t);
  return t;
}

inline TermPtr register_v1(int j, long value) { return loc(rname(j), number_v1(value, j)); }

inline TermPtr instr_v1(int i, const Instr& ins) {
  switch (ins.op) {
    case Op::Inc: {
      // !p_i . r_j{r_j[u_j!.@]} . p_{i+1}!
      auto pat = loc(rname(ins.reg), act(out(uname(ins.reg)), hole()));
      return repl(in(pname(i)), act(update(rname(ins.reg), pat), act(out(pname(i + 1)), nil())));
    }
    case Op::DecJ: {
      // !p_i . (u_j.p_{i+1}! + z_j.r_j{r_j[z_j!]}.p_s!)
      auto reset = loc(rname(ins.reg), act(out(zname(ins.reg)), nil()));
      Branch dec{in(uname(ins.reg)), act(out(pname(i + 1)), nil())};
      Branch jmp{in(zname(ins.reg)),
                 act(update(rname(ins.reg), reset), act(out(pname(ins.target)), nil()))};
      return repl(in(pname(i)), sum({dec, jmp}));
    }
    case Op::Halt:
      // !p_i . (e + p_i!)
      return repl(in(pname(i)), sum({Branch{in("e"), nil()}, Branch{out(pname(i)), nil()}}));
  }
  return nil();
}

// register contents for variant 2: !inc_j.u_j! | u_j!^m | z_j!
inline TermPtr register_body_v2(int j, long m) {
  std::vector<TermPtr> ps;
  ps.push_back(repl(in(incname(j)), act(out(uname(j)), nil())));
  for (long i = 0; i < m; ++i) ps.push_back(act(out(uname(j)), nil()));
  ps.push_back(act(out(zname(j)), nil()));
  return par(std::move(ps));
}

inline TermPtr register_v2(int j, long m) { return loc(rname(j), register_body_v2(j, m)); }

inline TermPtr instr_v2(int i, const Instr& ins) {
  int j = ins.reg;
  switch (ins.op) {
    case Op::Inc: {
      // !p_i.f.(g! | b.inc_j!.p_{i+1}!)
      auto inner = par({act(out("g"), nil()),
                        act(in("b"), act(out(incname(j)), act(out(pname(i + 1)), nil())))});
      return repl(in(pname(i)), act(in("f"), inner));
    }
    case Op::DecJ: {
      // !p_i.f.(g! | (u_j.(b! | p_{i+1}!) + z_j.r_j{r_j[init_j]}.p_s!))
      Branch dec{in(uname(j)), par({act(out("b"), nil()), act(out(pname(i + 1)), nil())})};
      Branch jmp{in(zname(j)), act(update(rname(j), register_v2(j, 0)),
                                   act(out(pname(ins.target)), nil()))};
      auto inner = par({act(out("g"), nil()), sum({dec, jmp})});
      return repl(in(pname(i)), act(in("f"), inner));
    }
    case Op::Halt: {
      // !p_i.h!.h.r_0{r_0[init_0]}.r_1{r_1[init_1]}.p_1!
      auto tail = act(update(rname(0), register_v2(0, 0)),
                      act(update(rname(1), register_v2(1, 0)), act(out(pname(1)), nil())));
      return repl(in(pname(i)), act(out("h"), act(in("h"), tail)));
    }
  }
  return nil();
}

// Reg_j = !inc_j.c_j{c_j[@]}.ack!.u_j.c_j{c_j[@]}.ack!
inline TermPtr collector_pat(int j) { return loc(cname(j), hole()); }

inline TermPtr reg_proc_v3(int j) {
  auto tail = act(update(cname(j), collector_pat(j)), act(out("ack"), nil()));
  auto mid = act(in(uname(j)), tail);
  return repl(in(incname(j)), act(update(cname(j), collector_pat(j)), act(out("ack"), mid)));
}

// unit process u_j.c_j{c_j[@]}.ack!
inline TermPtr unit_v3(int j) {
  return act(in(uname(j)), act(update(cname(j), collector_pat(j)), act(out("ack"), nil())));
}

inline TermPtr register_v3(int j) { return loc(rname(j), par({reg_proc_v3(j), loc(cname(j), nil())})); }

// r_j{r_j[Reg_j | c_j[@]]}
inline TermPtr reset_pat_v3(int j) {
  return loc(rname(j), par({reg_proc_v3(j), loc(cname(j), hole())}));
}

inline TermPtr instr_v3(int i, const Instr& ins) {
  int j = ins.reg;
  switch (ins.op) {
    case Op::Inc: {
      // !p_i.f.(g! | b.inc_j!.ack.p_{i+1}!)
      auto inner = par({act(out("g"), nil()),
                        act(in("b"), act(out(incname(j)), act(in("ack"), act(out(pname(i + 1)), nil()))))});
      return repl(in(pname(i)), act(in("f"), inner));
    }
    case Op::DecJ: {
      // !p_i.f.(g! | (u_j!.ack.(b! | p_{i+1}!) + c_j{@}.r_j{r_j[Reg_j | c_j[@]]}.p_s!))
      Branch dec{out(uname(j)),
                 act(in("ack"), par({act(out("b"), nil()), act(out(pname(i + 1)), nil())}))};
      Branch jmp{update(cname(j), hole()),
                 act(update(rname(j), reset_pat_v3(j)), act(out(pname(ins.target)), nil()))};
      auto inner = par({act(out("g"), nil()), sum({dec, jmp})});
      return repl(in(pname(i)), act(in("f"), inner));
    }
    case Op::Halt: {
      // !p_i.h!.h.c_0{@}.r_0{...}.c_1{@}.r_1{...}.p_1!
      auto tail = act(update(cname(0), hole()),
                      act(update(rname(0), reset_pat_v3(0)),
                          act(update(cname(1), hole()),
                              act(update(rname(1), reset_pat_v3(1)), act(out(pname(1)), nil())))));
      return repl(in(pname(i)), act(out("h"), act(in("h"), tail)));
    }
  }
  return nil();
}

// Control = !a.(f! | b! | a!) | a!.a.(p_1! | e) | !h.(g.f! | h!)
inline TermPtr control() {
  auto round = repl(in("a"), par({act(out("f"), nil()), act(out("b"), nil()), act(out("a"), nil())}));
  auto kick = act(out("a"), act(in("a"), par({act(out(pname(1)), nil()), act(in("e"), nil())})));
  auto restore = repl(in("h"), par({act(in("g"), act(out("f"), nil())), act(out("h"), nil())}));
  return par({round, kick, restore});
}

// Res(alpha,beta,gamma): the resource pool mid-run, abstracting Control.
inline TermPtr resources(long alpha, long beta, long gamma) {
  std::vector<TermPtr> ps;
  for (long i = 0; i < alpha; ++i) ps.push_back(act(out("f"), nil()));
  for (long i = 0; i < beta; ++i) ps.push_back(act(out("b"), nil()));
  for (long i = 0; i < gamma; ++i) ps.push_back(act(out("g"), nil()));
  ps.push_back(repl(in("a"), par({act(out("f"), nil()), act(out("b"), nil()), act(out("a"), nil())})));
  ps.push_back(repl(in("h"), par({act(in("g"), act(out("f"), nil())), act(out("h"), nil())})));
  return par(std::move(ps));
}

}  // namespace mmenc

// Full machine encoding: registers + instruction bank + program counter
// (variants 2 and 3 start through the Control process instead).
inline TermPtr encode_mm(const MinskyMachine& m, int variant) {
  validate_mm(m);
  if (variant < 1 || variant > 3) throw std::invalid_argument("variant must be 1, 2 or 3");
  if (variant != 1 && (m.init_r0 != 0 || m.init_r1 != 0))
    throw std::invalid_argument("variants 2 and 3 require initial registers (0,0)");
  std::vector<TermPtr> ps;
  switch (variant) {
    case 1:
      ps.push_back(mmenc::register_v1(0, m.init_r0));
      ps.push_back(mmenc::register_v1(1, m.init_r1));
      for (int i = 1; i <= m.size(); ++i) ps.push_back(mmenc::instr_v1(i, m.at(i)));
      ps.push_back(act(out(mmenc::pname(1)), nil()));
      break;
    case 2:
      ps.push_back(mmenc::register_v2(0, 0));
      ps.push_back(mmenc::register_v2(1, 0));
      for (int i = 1; i <= m.size(); ++i) ps.push_back(mmenc::instr_v2(i, m.at(i)));
      ps.push_back(mmenc::control());
      break;
    case 3:
      ps.push_back(mmenc::register_v3(0));
      ps.push_back(mmenc::register_v3(1));
      for (int i = 1; i <= m.size(); ++i) ps.push_back(mmenc::instr_v3(i, m.at(i)));
      ps.push_back(mmenc::control());
      break;
  }
  return par(std::move(ps));
}

struct ResourceParams {
  long alpha = 0;
  long beta = 0;
  long gamma = 0;
};

// Mid-run configuration encoding used by the simulation lemmas.
inline TermPtr encode_cfg(const MinskyMachine& m, const Config& c, int variant,
                          ResourceParams res = {}) {
  validate_mm(m);
  if (c.pc < 1 || c.pc > m.size()) throw std::invalid_argument("pc outside 1..n");
  if (c.m0 < 0 || c.m1 < 0) throw std::invalid_argument("negative register value");
  std::vector<TermPtr> ps;
  ps.push_back(act(out(mmenc::pname(c.pc)), nil()));
  switch (variant) {
    case 1:
      ps.push_back(mmenc::register_v1(0, c.m0));
      ps.push_back(mmenc::register_v1(1, c.m1));
      for (int i = 1; i <= m.size(); ++i) ps.push_back(mmenc::instr_v1(i, m.at(i)));
      break;
    case 2:
      ps.push_back(act(in("e"), nil()));
      ps.push_back(mmenc::register_v2(0, c.m0));
      ps.push_back(mmenc::register_v2(1, c.m1));
      for (int i = 1; i <= m.size(); ++i) ps.push_back(mmenc::instr_v2(i, m.at(i)));
      ps.push_back(mmenc::resources(res.alpha, res.beta, res.gamma));
      break;
    case 3: {
      ps.push_back(act(in("e"), nil()));
      for (int j = 0; j <= 1; ++j) {
        std::vector<TermPtr> inside;
        long mj = (j == 0 ? c.m0 : c.m1);
        for (long i = 0; i < mj; ++i) inside.push_back(mmenc::unit_v3(j));
        inside.push_back(mmenc::reg_proc_v3(j));
        inside.push_back(loc(mmenc::cname(j), mmenc::reg_proc_v3(j)));
        ps.push_back(loc(mmenc::rname(j), par(std::move(inside))));
      }
      for (int i = 1; i <= m.size(); ++i) ps.push_back(mmenc::instr_v3(i, m.at(i)));
      ps.push_back(mmenc::resources(res.alpha, res.beta, res.gamma));
      break;
    }
    default:
      throw std::invalid_argument("variant must be 1, 2 or 3");
  }
  return par(std::move(ps));
}

}  // namespace adapt
