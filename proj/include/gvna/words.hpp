#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "gvna/error.hpp"
#include "gvna/group.hpp"

namespace gvna {

// Textual element syntax:
//   words            a, ab, a^3, A (= a^-1), a^-2, g12, 1 (identity)
//   direct products  (w1, w2, ...)
//   semidirect       (w; eps)
//   matrices         [m11, m12, ..., mdd]   row-major

inline std::string format_element(const GroupElement& g) {
  const ContextPtr& ctx = g.context();
  if (!ctx) throw input_error("element without context");
  switch (ctx->kind()) {
    case GroupContext::Kind::FreeGroup:
    case GroupContext::Kind::FreeProductOfCyclics: {
      if (g.word().empty()) return "1";
      std::string out;
      for (const Syllable& s : g.word()) {
        const std::string name = ctx->generator_name(s.gen);
        if (s.exp == 1) {
          out += name;
        } else if (s.exp == -1 && name.size() == 1 && std::islower(static_cast<unsigned char>(name[0]))) {
          out += static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        } else {
          out += name + "^" + std::to_string(s.exp);
        }
      }
      return out;
    }
    case GroupContext::Kind::DirectProduct: {
      std::string out = "(";
      for (std::size_t i = 0; i < g.parts().size(); ++i) {
        if (i > 0) out += ", ";
        out += format_element(g.parts()[i]);
      }
      return out + ")";
    }
    case GroupContext::Kind::Semidirect:
      return "(" + format_element(g.twisted_base()) + "; " + std::to_string(g.twist()) + ")";
    case GroupContext::Kind::MatrixGroup: {
      std::string out = "[";
      const IntMatrix& m = g.matrix();
      for (std::size_t i = 0; i < m.a.size(); ++i) {
        if (i > 0) out += ",";
        out += m.a[i].str();
      }
      return out + "]";
    }
  }
  throw input_error("unreachable context kind");
}

namespace detail {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    if (pos >= text.size()) throw input_error("unexpected end of input in element syntax");
    return text[pos];
  }
  char take() {
    const char c = peek();
    ++pos;
    return c;
  }
  void expect(char c) {
    if (take() != c)
      throw input_error(std::string("expected '") + c + "' in element syntax: '" +
                        std::string(text) + "'");
  }
  long long integer() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
      throw input_error("expected integer in element syntax: '" + std::string(text) + "'");
    return std::stoll(std::string(text.substr(start, pos - start)));
  }
};

inline GroupElement parse_at(const ContextPtr& ctx, Cursor& cur);

inline GroupElement parse_word(const ContextPtr& ctx, Cursor& cur) {
  std::vector<Syllable> raw;
  bool any = false;
  while (!cur.done()) {
    cur.skip_ws();
    const char c = cur.text[cur.pos];
    if (c == ',' || c == ';' || c == ')' || c == ']') break;
    if (c == '1' && raw.empty() && !any) {
      ++cur.pos;
      any = true;
      continue;
    }
    int gen = -1;
    bool inverse = false;
    if ((c == 'g' || c == 'G') && cur.pos + 1 < cur.text.size() &&
        std::isdigit(static_cast<unsigned char>(cur.text[cur.pos + 1]))) {
      inverse = (c == 'G');
      ++cur.pos;
      const long long idx = cur.integer();
      if (idx < 1 || idx > ctx->num_generators())
        throw input_error("generator index out of range: g" + std::to_string(idx));
      gen = static_cast<int>(idx - 1);
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      inverse = std::isupper(static_cast<unsigned char>(c));
      gen = ctx->generator_by_name(lower);
      if (gen < 0) throw input_error(std::string("unknown generator '") + c + "'");
      ++cur.pos;
    } else {
      throw input_error(std::string("unexpected character '") + c + "' in word");
    }
    long long exp = 1;
    cur.skip_ws();
    if (cur.pos < cur.text.size() && cur.text[cur.pos] == '^') {
      ++cur.pos;
      exp = cur.integer();
    }
    if (inverse) exp = -exp;
    raw.push_back({gen, exp});
    any = true;
  }
  if (!any) throw input_error("empty word in element syntax");
  return reduce(ctx, raw);
}

inline GroupElement parse_at(const ContextPtr& ctx, Cursor& cur) {
  switch (ctx->kind()) {
    case GroupContext::Kind::FreeGroup:
    case GroupContext::Kind::FreeProductOfCyclics:
      return parse_word(ctx, cur);
    case GroupContext::Kind::DirectProduct: {
      cur.expect('(');
      GroupElement::Tuple parts;
      for (std::size_t i = 0; i < ctx->factors().size(); ++i) {
        if (i > 0) cur.expect(',');
        parts.push_back(parse_at(ctx->factors()[i], cur));
      }
      cur.expect(')');
      return direct_element(ctx, std::move(parts));
    }
    case GroupContext::Kind::Semidirect: {
      cur.expect('(');
      GroupElement base = parse_at(ctx->base(), cur);
      cur.expect(';');
      const long long twist = cur.integer();
      cur.expect(')');
      return semidirect_element(ctx, std::move(base), twist);
    }
    case GroupContext::Kind::MatrixGroup: {
      cur.expect('[');
      std::vector<Integer> entries;
      const int d = ctx->dim();
      for (int i = 0; i < d * d; ++i) {
        if (i > 0) cur.expect(',');
        entries.emplace_back(cur.integer());
      }
      cur.expect(']');
      return matrix_element(ctx, IntMatrix(d, std::move(entries)));
    }
  }
  throw input_error("unreachable context kind");
}

}  // namespace detail

inline GroupElement parse_element(const ContextPtr& ctx, std::string_view text) {
  if (!ctx) throw input_error("null context");
  detail::Cursor cur{text};
  GroupElement g = detail::parse_at(ctx, cur);
  if (!cur.done()) throw input_error("trailing input in element syntax: '" + std::string(text) + "'");
  return g;
}

}  // namespace gvna
