/*
 * Copyright 2026 The mcmelim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace mcm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
    if (i > start) {
      out.push_back(s.substr(start, i - start));
    }
  }
  return out;
}

/// Grammar context for one parse run: declared sizes plus the current line.
struct LineParser {
  std::uint32_t n_qubits = 0;
  std::uint32_t n_clbits = 0;
  int line = 0;

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line, message); }

  std::uint32_t parse_index(std::string_view tok, char prefix) const {
    if (tok.size() < 2 || tok[0] != prefix) {
      fail("expected " + std::string(1, prefix) + "<index>, got '" + std::string(tok) + "'");
    }
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      fail("bad index in '" + std::string(tok) + "'");
    }
    return value;
  }

  Qubit parse_qubit(std::string_view tok) const {
    Qubit q{parse_index(tok, 'q')};
    if (q.index >= n_qubits) {
      fail("qubit " + std::string(tok) + " out of range");
    }
    return q;
  }

  Clbit parse_clbit(std::string_view tok) const {
    Clbit b{parse_index(tok, 'c')};
    if (b.index >= n_clbits) {
      fail("clbit " + std::string(tok) + " out of range");
    }
    return b;
  }

  double parse_number(std::string_view tok) const {
    std::string buf(tok);
    char* end = nullptr;
    double value = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(value)) {
      fail("bad number '" + buf + "'");
    }
    return value;
  }

  void check_distinct(const BaseOp& op) const {
    auto qs = qubits_of(op);
    std::sort(qs.begin(), qs.end());
    if (std::adjacent_find(qs.begin(), qs.end()) != qs.end()) {
      fail("duplicate qubit in instruction");
    }
  }

  Gate parse_plain_gate(const std::vector<std::string_view>& tokens) const {
    std::string_view head = tokens[0];
    Gate g;
    auto paren = head.find('(');
    std::string_view name = head.substr(0, paren);
    auto kind = gate_kind_from_name(name);
    if (!kind) {
      fail("unknown gate '" + std::string(name) + "'");
    }
    g.kind = *kind;
    if (paren != std::string_view::npos) {
      if (head.back() != ')') {
        fail("unterminated parameter list");
      }
      std::string_view args = head.substr(paren + 1, head.size() - paren - 2);
      std::size_t start = 0;
      while (start <= args.size()) {
        auto comma = args.find(',', start);
        std::string_view piece =
            comma == std::string_view::npos ? args.substr(start) : args.substr(start, comma - start);
        piece = trim(piece);
        if (piece.empty()) {
          fail("empty gate parameter");
        }
        g.params.push_back(parse_number(piece));
        if (comma == std::string_view::npos) {
          break;
        }
        start = comma + 1;
      }
    }
    if (g.params.size() != gate_num_params(g.kind)) {
      fail("gate '" + std::string(name) + "' takes " +
           std::to_string(gate_num_params(g.kind)) + " parameter(s)");
    }
    const std::size_t want = gate_num_targets(g.kind);
    if (tokens.size() - 1 != want) {
      fail("gate '" + std::string(name) + "' takes " + std::to_string(want) + " qubit(s)");
    }
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      g.targets.push_back(parse_qubit(tokens[i]));
    }
    return g;
  }

  /// Gate-or-controlled line: plain gates, ctrl/nctrl prefixes, cx/cz/ccx sugar.
  BaseOp parse_base(std::string_view text) const {
    text = trim(text);
    if (text.empty()) {
      fail("expected a gate");
    }
    auto tokens = split_ws(text);
    std::string_view head = tokens[0];

    if (head == "ctrl" || head == "nctrl") {
      auto colon = text.find(':');
      if (colon == std::string_view::npos) {
        fail("missing ':' after control list");
      }
      Controlled c;
      bool negative = false;
      for (std::string_view tok : split_ws(text.substr(0, colon))) {
        if (tok == "ctrl") {
          negative = false;
          continue;
        }
        if (tok == "nctrl") {
          negative = true;
          continue;
        }
        std::size_t start = 0;
        while (start <= tok.size()) {
          auto comma = tok.find(',', start);
          std::string_view piece = comma == std::string_view::npos
                                       ? tok.substr(start)
                                       : tok.substr(start, comma - start);
          piece = trim(piece);
          if (!piece.empty()) {
            (negative ? c.neg_controls : c.pos_controls).push_back(parse_qubit(piece));
          }
          if (comma == std::string_view::npos) {
            break;
          }
          start = comma + 1;
        }
      }
      if (c.pos_controls.empty() && c.neg_controls.empty()) {
        fail("empty control list");
      }
      BaseOp inner = parse_base(text.substr(colon + 1));
      if (const auto* g = std::get_if<Gate>(&inner)) {
        c.base = *g;
      } else {
        const auto& nested = std::get<Controlled>(inner);
        c.base = nested.base;
        c.pos_controls.insert(c.pos_controls.end(), nested.pos_controls.begin(),
                              nested.pos_controls.end());
        c.neg_controls.insert(c.neg_controls.end(), nested.neg_controls.begin(),
                              nested.neg_controls.end());
      }
      check_distinct(BaseOp(c));
      return c;
    }

    if (head == "cx" || head == "cz" || head == "ccx") {
      const std::size_t want = head == "ccx" ? 3 : 2;
      if (tokens.size() - 1 != want) {
        fail("'" + std::string(head) + "' takes " + std::to_string(want) + " qubits");
      }
      Controlled c;
      for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
        c.pos_controls.push_back(parse_qubit(tokens[i]));
      }
      c.base.kind = head == "cz" ? GateKind::z : GateKind::x;
      c.base.targets.push_back(parse_qubit(tokens.back()));
      check_distinct(BaseOp(c));
      return c;
    }

    Gate g = parse_plain_gate(tokens);
    check_distinct(BaseOp(g));
    return g;
  }
};

bool starts_dynamic(std::string_view text) {
  auto tokens = split_ws(text);
  if (tokens.empty()) {
    return false;
  }
  return tokens[0] == "measure" || tokens[0] == "if" || tokens[0] == "prob" ||
         tokens[0] == "barrier";
}

}  // namespace

Circuit parse(std::string_view text) {
  Circuit c;
  LineParser p;
  bool saw_qubits = false, saw_clbits = false, saw_output = false, in_body = false;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view raw =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++p.line;

    auto hash = raw.find('#');
    if (hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    std::string_view line = trim(raw);
    if (line.empty()) {
      continue;
    }
    auto tokens = split_ws(line);
    std::string_view head = tokens[0];

    if (head == "qubits" || head == "clbits" || head == "output") {
      if (in_body) {
        p.fail("header line after instructions");
      }
      if (head == "qubits") {
        if (saw_qubits || tokens.size() != 2) {
          p.fail("malformed header");
        }
        double n = p.parse_number(tokens[1]);
        if (n < 1 || n != std::floor(n) || n > 1u << 20) {
          p.fail("qubit count must be a positive integer");
        }
        c.n_qubits = static_cast<std::uint32_t>(n);
        p.n_qubits = c.n_qubits;
        saw_qubits = true;
      } else if (head == "clbits") {
        if (!saw_qubits || saw_clbits || tokens.size() != 2) {
          p.fail("malformed header");
        }
        double n = p.parse_number(tokens[1]);
        if (n < 0 || n != std::floor(n) || n > 1u << 20) {
          p.fail("clbit count must be a non-negative integer");
        }
        c.n_clbits = static_cast<std::uint32_t>(n);
        p.n_clbits = c.n_clbits;
        saw_clbits = true;
      } else {
        if (!saw_clbits || saw_output || tokens.size() < 2) {
          p.fail("malformed header");
        }
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          c.outputs.push_back(p.parse_clbit(tokens[i]));
        }
        std::sort(c.outputs.begin(), c.outputs.end());
        if (std::adjacent_find(c.outputs.begin(), c.outputs.end()) != c.outputs.end()) {
          p.fail("duplicate output bit");
        }
        saw_output = true;
      }
      continue;
    }

    if (!saw_qubits || !saw_clbits) {
      p.fail("expected 'qubits' and 'clbits' headers first");
    }
    in_body = true;

    if (head == "barrier") {
      if (tokens.size() != 1) {
        p.fail("barrier takes no arguments");
      }
      c.instructions.emplace_back(Barrier{});
    } else if (head == "measure") {
      if (tokens.size() != 4 || tokens[2] != "->") {
        p.fail("expected 'measure q<i> -> c<j>'");
      }
      c.instructions.emplace_back(Measure{p.parse_qubit(tokens[1]), p.parse_clbit(tokens[3])});
    } else if (head == "if") {
      auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        p.fail("expected ':' in if");
      }
      auto cond = split_ws(line.substr(0, colon));
      if (cond.size() != 4 || cond[2] != "==") {
        p.fail("expected 'if c<j> == <0|1> : ...'");
      }
      IfGate f;
      f.bit = p.parse_clbit(cond[1]);
      if (cond[3] == "0") {
        f.value = 0;
      } else if (cond[3] == "1") {
        f.value = 1;
      } else {
        p.fail("condition value must be 0 or 1");
      }
      std::string_view payload = trim(line.substr(colon + 1));
      if (starts_dynamic(payload)) {
        p.fail("if payload must be a gate");
      }
      f.base = p.parse_base(payload);
      c.instructions.emplace_back(std::move(f));
    } else if (head == "prob") {
      if (tokens.size() < 3) {
        p.fail("expected 'prob <p> <gate>'");
      }
      Prob pr;
      pr.p = p.parse_number(tokens[1]);
      if (!(pr.p >= 0.0 && pr.p <= 1.0)) {
        p.fail("probability outside [0, 1]");
      }
      std::size_t after = static_cast<std::size_t>(tokens[1].data() - line.data());
      std::string_view payload = trim(line.substr(after + tokens[1].size()));
      if (starts_dynamic(payload)) {
        p.fail("prob wraps dynamic op");
      }
      pr.base = p.parse_base(payload);
      c.instructions.emplace_back(std::move(pr));
    } else {
      BaseOp op = p.parse_base(line);
      c.instructions.emplace_back(to_instruction(op));
    }
  }
  if (!saw_qubits || !saw_clbits) {
    throw ParseError(p.line, "missing 'qubits'/'clbits' headers");
  }
  return c;
}

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

void write_gate(std::ostringstream& out, const Gate& g) {
  out << gate_name(g.kind);
  if (!g.params.empty()) {
    out << '(';
    for (std::size_t i = 0; i < g.params.size(); ++i) {
      if (i) {
        out << ',';
      }
      out << format_double(g.params[i]);
    }
    out << ')';
  }
  for (Qubit q : g.targets) {
    out << " q" << q.index;
  }
}

void write_base(std::ostringstream& out, const BaseOp& op) {
  if (const auto* g = std::get_if<Gate>(&op)) {
    write_gate(out, *g);
    return;
  }
  const auto& c = std::get<Controlled>(op);
  const bool sugar = c.neg_controls.empty() && c.base.params.empty() &&
                     c.base.targets.size() == 1 &&
                     ((c.base.kind == GateKind::x && c.pos_controls.size() <= 2) ||
                      (c.base.kind == GateKind::z && c.pos_controls.size() == 1));
  if (sugar) {
    out << (c.base.kind == GateKind::z ? "cz" : c.pos_controls.size() == 2 ? "ccx" : "cx");
    for (Qubit q : c.pos_controls) {
      out << " q" << q.index;
    }
    out << " q" << c.base.targets[0].index;
    return;
  }
  if (!c.pos_controls.empty()) {
    out << "ctrl ";
    for (std::size_t i = 0; i < c.pos_controls.size(); ++i) {
      if (i) {
        out << ',';
      }
      out << 'q' << c.pos_controls[i].index;
    }
    if (!c.neg_controls.empty()) {
      out << ' ';
    }
  }
  if (!c.neg_controls.empty()) {
    out << "nctrl ";
    for (std::size_t i = 0; i < c.neg_controls.size(); ++i) {
      if (i) {
        out << ',';
      }
      out << 'q' << c.neg_controls[i].index;
    }
  }
  out << " : ";
  write_gate(out, c.base);
}

}  // namespace

std::string serialize(const Instruction& ins) {
  std::ostringstream out;
  if (const auto* g = std::get_if<Gate>(&ins)) {
    write_gate(out, *g);
  } else if (const auto* c = std::get_if<Controlled>(&ins)) {
    write_base(out, BaseOp(*c));
  } else if (const auto* m = std::get_if<Measure>(&ins)) {
    out << "measure q" << m->qubit.index << " -> c" << m->bit.index;
  } else if (const auto* f = std::get_if<IfGate>(&ins)) {
    out << "if c" << f->bit.index << " == " << f->value << " : ";
    write_base(out, f->base);
  } else if (const auto* p = std::get_if<Prob>(&ins)) {
    out << "prob " << format_double(p->p) << ' ';
    write_base(out, p->base);
  } else {
    out << "barrier";
  }
  return out.str();
}

std::string serialize(const Circuit& c) {
  std::ostringstream out;
  out << "qubits " << c.n_qubits << '\n';
  out << "clbits " << c.n_clbits << '\n';
  if (!c.outputs.empty()) {
    out << "output";
    for (Clbit b : c.outputs) {
      out << " c" << b.index;
    }
    out << '\n';
  }
  for (const auto& ins : c.instructions) {
    out << serialize(ins) << '\n';
  }
  return out.str();
}

}  // namespace mcm
