#include "planar/parser.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace planar {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      detail_(message),
      line_(line),
      column_(column) {}

namespace {

constexpr std::uint64_t kMaxExponentLiteral = 1U << 20;

class ExprParser {
 public:
  ExprParser(std::string_view src, const ParseOptions& options, std::size_t line0, std::size_t col0)
      : src_(src), options_(options), line0_(line0), col0_(col0) {}

  BivarPoly parse() {
    skip_ws();
    if (at_end()) fail("empty expression");
    BivarPoly r = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return r;
  }

 private:
  std::string_view src_;
  const ParseOptions& options_;
  std::size_t line0_;
  std::size_t col0_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    std::size_t line = line0_;
    std::size_t col = col0_;
    for (std::size_t i = 0; i < at && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  BivarPoly checked_mul(const BivarPoly& a, const BivarPoly& b, std::size_t at) const {
    try {
      return multiply(a, b, options_.max_degree);
    } catch (const DegreeLimitError& e) {
      fail_at(at, e.what());
    }
  }

  BivarPoly expr() {
    BivarPoly acc = term();
    while (true) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      BivarPoly rhs = term();
      if (c == '+') acc += rhs; else acc -= rhs;
    }
  }

  BivarPoly term() {
    BivarPoly acc = factor();
    while (true) {
      skip_ws();
      char c = peek();
      if (c != '*' && c != '/') return acc;
      std::size_t op_pos = pos_;
      ++pos_;
      BivarPoly rhs = factor();
      if (c == '*') {
        acc = checked_mul(acc, rhs, op_pos);
      } else {
        if (!rhs.is_constant()) fail_at(op_pos, "division by non-constant");
        if (rhs.is_zero()) fail_at(op_pos, "division by zero");
        acc = acc.scaled(Rational(1) / rhs.constant_term());
      }
    }
  }

  BivarPoly factor() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      if (++depth_ > 512) fail("expression nested too deeply");
      BivarPoly r = factor().negated();
      --depth_;
      return r;
    }
    std::size_t start = pos_;
    BivarPoly base = atom();
    skip_ws();
    if (peek() != '^') return base;
    std::size_t caret = pos_;
    ++pos_;
    skip_ws();
    if (peek() == '-') fail("negative exponent");
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("exponent must be a non-negative integer literal");
    std::uint64_t n = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      n = n * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (n > kMaxExponentLiteral) fail_at(caret, "exponent too large");
      ++pos_;
    }
    if (peek() == '.') fail("non-integer exponent");
    skip_ws();
    if (peek() == '^') fail("chained exponent; use parentheses");
    if (!base.is_zero() && static_cast<long long>(base.degree()) * static_cast<long long>(n) > options_.max_degree) {
      fail_at(start, "degree " + std::to_string(static_cast<long long>(base.degree()) * static_cast<long long>(n)) +
                         " exceeds the limit " + std::to_string(options_.max_degree));
    }
    return power(base, static_cast<unsigned>(n), options_.max_degree);
  }

  BivarPoly atom() {
    skip_ws();
    if (at_end()) fail("unexpected end of expression");
    char c = peek();
    if (c == '(') {
      std::size_t open = pos_;
      ++pos_;
      if (++depth_ > 512) fail("expression nested too deeply");
      BivarPoly r = expr();
      --depth_;
      skip_ws();
      if (peek() != ')') {
        if (at_end()) fail_at(open, "unclosed '('");
        fail("expected ')'");
      }
      ++pos_;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (peek() == '.' || peek() == 'e' || peek() == 'E') {
        fail_at(start, "floating-point literal not allowed in polynomial expressions");
      }
      Rational v;
      v.set_str(std::string(src_.substr(start, pos_ - start)), 10);
      return BivarPoly(v);
    }
    if (c == '.') fail("floating-point literal not allowed in polynomial expressions");
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
      std::string_view name = src_.substr(start, pos_ - start);
      if (name == "x") return BivarPoly::variable(Var::x);
      if (name == "y") return BivarPoly::variable(Var::y);
      fail_at(start, "unknown variable '" + std::string(name) + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }
};

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

}  // namespace

BivarPoly parse_poly(std::string_view src, const ParseOptions& options) {
  return ExprParser(src, options, 1, 1).parse();
}

MapSpec parse_map(std::string_view src, const ParseOptions& options) {
  MapSpec spec;
  bool have_name = false;
  bool have_kind = false;
  bool have_p = false;
  bool have_q = false;
  bool have_builtin = false;
  std::size_t p_line = 0;
  std::size_t q_line = 0;
  std::size_t p_col = 0;
  std::size_t q_col = 0;
  std::size_t builtin_line = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= src.size()) {
    std::size_t nl = src.find('\n', pos);
    std::string_view raw = src.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? src.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    std::size_t lead = raw.find_first_not_of(" \t\r");
    std::size_t sep = raw.find_first_of(":=");
    if (sep == std::string_view::npos) throw ParseError("expected 'key: value' or 'key = value'", line_no, lead + 1);
    std::string key = trim(raw.substr(0, sep));
    std::string_view value_raw = raw.substr(sep + 1);
    std::size_t value_off = sep + 1;
    while (value_off < raw.size() && std::isspace(static_cast<unsigned char>(raw[value_off]))) ++value_off;
    std::string value = trim(value_raw);
    const char sep_char = raw[sep];

    auto duplicate = [&](bool seen) {
      if (seen) throw ParseError("duplicate declaration of '" + key + "'", line_no, lead + 1);
    };
    auto require_sep = [&](char want) {
      if (sep_char != want) {
        throw ParseError(std::string("expected '") + want + "' after '" + key + "'", line_no, sep + 1);
      }
    };

    if (key == "name") {
      require_sep(':');
      duplicate(have_name);
      if (!is_identifier(value)) throw ParseError("invalid map name '" + value + "'", line_no, value_off + 1);
      spec.name = value;
      have_name = true;
    } else if (key == "kind") {
      require_sep(':');
      duplicate(have_kind);
      if (value == "polynomial") spec.kind = MapKind::polynomial;
      else if (value == "blackbox") spec.kind = MapKind::blackbox;
      else throw ParseError("kind must be 'polynomial' or 'blackbox'", line_no, value_off + 1);
      have_kind = true;
    } else if (key == "P" || key == "Q") {
      require_sep('=');
      bool is_p = key == "P";
      duplicate(is_p ? have_p : have_q);
      (is_p ? spec.p_expr : spec.q_expr) = value;
      (is_p ? p_line : q_line) = line_no;
      (is_p ? p_col : q_col) = value_off + 1;
      (is_p ? have_p : have_q) = true;
    } else if (key == "builtin") {
      require_sep('=');
      duplicate(have_builtin);
      if (!is_identifier(value)) throw ParseError("invalid builtin name '" + value + "'", line_no, value_off + 1);
      spec.builtin = value;
      builtin_line = line_no;
      have_builtin = true;
    } else {
      throw ParseError("unknown key '" + key + "'", line_no, lead + 1);
    }
  }

  std::size_t end_line = line_no;
  if (!have_name) throw ParseError("missing 'name' declaration", end_line, 1);
  if (!have_kind) throw ParseError("missing 'kind' declaration", end_line, 1);
  if (spec.kind == MapKind::polynomial) {
    if (have_builtin) throw ParseError("mixed kinds: 'builtin' in a polynomial map", builtin_line, 1);
    if (!have_p) throw ParseError("missing component 'P'", end_line, 1);
    if (!have_q) throw ParseError("missing component 'Q'", end_line, 1);
    spec.p = ExprParser(spec.p_expr, options, p_line, p_col).parse();
    spec.q = ExprParser(spec.q_expr, options, q_line, q_col).parse();
  } else {
    if (have_p || have_q) throw ParseError("mixed kinds: component expression in a blackbox map", have_p ? p_line : q_line, 1);
    if (!have_builtin) throw ParseError("missing 'builtin' declaration", end_line, 1);
  }
  return spec;
}

MapSpec load_map_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open map file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str(), options);
}

std::string print_map(const MapSpec& spec) {
  std::ostringstream os;
  os << "name: " << spec.name << '\n';
  if (spec.kind == MapKind::polynomial) {
    os << "kind: polynomial\n";
    os << "P = " << spec.p.to_string() << '\n';
    os << "Q = " << spec.q.to_string() << '\n';
  } else {
    os << "kind: blackbox\n";
    os << "builtin = " << spec.builtin << '\n';
  }
  return os.str();
}

MapSpec make_polynomial_map(std::string name, const BivarPoly& p, const BivarPoly& q) {
  MapSpec s;
  s.name = std::move(name);
  s.kind = MapKind::polynomial;
  s.p = p;
  s.q = q;
  s.p_expr = p.to_string();
  s.q_expr = q.to_string();
  return s;
}

MapSpec make_blackbox_map(std::string name, std::string builtin) {
  MapSpec s;
  s.name = std::move(name);
  s.kind = MapKind::blackbox;
  s.builtin = std::move(builtin);
  return s;
}

}  // namespace planar
