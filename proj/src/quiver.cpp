#include "qrep/quiver.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "qrep/error.hpp"

namespace qrep {

namespace {

const std::vector<std::pair<FamilyTag, std::string>>& tag_names() {
  static const std::vector<std::pair<FamilyTag, std::string>> names = {
      {FamilyTag::A_n, "A_n"},
      {FamilyTag::AInfTruncation, "A_inf_truncation"},
      {FamilyTag::BarrenTreeTruncation, "barren_tree_truncation"},
      {FamilyTag::NLoop, "n_loop"},
      {FamilyTag::InfParallelTruncation, "inf_parallel_truncation"},
      {FamilyTag::Custom, "custom"},
  };
  return names;
}

}  // namespace

std::string to_string(FamilyTag tag) {
  for (const auto& [t, name] : tag_names())
    if (t == tag) return name;
  return "?";
}

FamilyTag parse_family_tag(std::string_view text) {
  for (const auto& [t, name] : tag_names())
    if (name == text) return t;
  throw InvalidInput("unknown family tag '" + std::string(text) + "'");
}

std::string to_string(TriState t) {
  switch (t) {
    case TriState::Yes:
      return "yes";
    case TriState::No:
      return "no";
    case TriState::Unknown:
      return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------

Quiver::Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows,
               std::optional<FamilyTag> tag)
    : vertices_(std::move(vertices)), arrows_(std::move(arrows)), tag_(tag) {
  std::set<std::string> ids;
  for (const auto& v : vertices_) {
    if (v.empty()) throw InvalidInput("empty vertex id");
    if (!ids.insert(v).second) throw InvalidInput("duplicate id '" + v + "'");
  }
  for (const auto& a : arrows_) {
    if (a.id.empty()) throw InvalidInput("empty arrow id");
    if (!ids.insert(a.id).second) throw InvalidInput("duplicate id '" + a.id + "'");
    if (a.source >= vertices_.size() || a.target >= vertices_.size())
      throw InvalidInput("arrow '" + a.id + "' has an endpoint that is not a vertex");
  }
  out_.assign(vertices_.size(), {});
  in_.assign(vertices_.size(), {});
  for (std::size_t i = 0; i < arrows_.size(); ++i) {
    out_[arrows_[i].source].push_back(i);
    in_[arrows_[i].target].push_back(i);
  }
  // Kahn's algorithm, smallest index first.
  std::vector<std::size_t> indeg(vertices_.size(), 0);
  for (const auto& a : arrows_) ++indeg[a.target];
  std::set<std::size_t> ready;
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (indeg[v] == 0) ready.insert(v);
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    topo_.push_back(v);
    for (auto a : out_[v])
      if (--indeg[arrows_[a].target] == 0) ready.insert(arrows_[a].target);
  }
  validate_tag();
}

Quiver Quiver::line(std::size_t n) {
  if (n == 0) throw InvalidInput("line quiver needs at least one vertex");
  std::vector<std::string> v;
  std::vector<Arrow> a;
  for (std::size_t i = 1; i <= n; ++i) v.push_back("v" + std::to_string(i));
  for (std::size_t i = 1; i < n; ++i) a.push_back({"a" + std::to_string(i), i - 1, i});
  return Quiver(v, a, FamilyTag::A_n);
}

Quiver Quiver::loop(std::size_t n) {
  if (n == 0) throw InvalidInput("loop quiver needs at least one vertex");
  std::vector<std::string> v;
  std::vector<Arrow> a;
  for (std::size_t i = 1; i <= n; ++i) v.push_back("v" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) a.push_back({"a" + std::to_string(i), i - 1, i % n});
  return Quiver(v, a, FamilyTag::NLoop);
}

Quiver Quiver::single_vertex(const std::string& name) { return Quiver({name}, {}, std::nullopt); }

std::size_t Quiver::vertex_index(std::string_view name) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == name) return i;
  throw InvalidInput("unknown vertex '" + std::string(name) + "'");
}

std::size_t Quiver::arrow_index(std::string_view name) const {
  for (std::size_t i = 0; i < arrows_.size(); ++i)
    if (arrows_[i].id == name) return i;
  throw InvalidInput("unknown arrow '" + std::string(name) + "'");
}

const std::vector<std::size_t>& Quiver::topological_order() const {
  if (!is_acyclic()) throw Refusal("quiver has an oriented cycle");
  return topo_;
}

bool Quiver::is_line() const {
  if (arrows_.size() + 1 != vertices_.size()) return false;
  for (std::size_t i = 0; i < arrows_.size(); ++i)
    if (arrows_[i].source != i || arrows_[i].target != i + 1) return false;
  return true;
}

void Quiver::validate_tag() const {
  if (!tag_) return;
  const std::size_t n = vertices_.size();
  const std::size_t m = arrows_.size();
  auto fail = [&](const std::string& why) {
    throw InvalidInput("quiver does not match family tag " + to_string(*tag_) + ": " + why);
  };
  switch (*tag_) {
    case FamilyTag::A_n:
    case FamilyTag::AInfTruncation: {
      if (n == 0 || m + 1 != n || !is_acyclic()) fail("not a line");
      for (std::size_t v = 0; v < n; ++v)
        if (out_[v].size() > 1 || in_[v].size() > 1) fail("not a line");
      break;
    }
    case FamilyTag::BarrenTreeTruncation: {
      if (n == 0 || m + 1 != n || !is_acyclic()) fail("not a rooted tree");
      std::size_t roots = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (in_[v].empty()) ++roots;
        else if (in_[v].size() > 1) fail("vertex with two parents");
      }
      if (roots != 1) fail("not a rooted tree");
      break;
    }
    case FamilyTag::NLoop: {
      if (n == 0 || m != n) fail("needs as many arrows as vertices");
      for (std::size_t v = 0; v < n; ++v)
        if (out_[v].size() != 1 || in_[v].size() != 1) fail("not a single cycle");
      std::size_t v = 0, steps = 0;
      do {
        v = arrows_[out_[v][0]].target;
        ++steps;
      } while (v != 0 && steps <= n);
      if (steps != n) fail("not a single cycle");
      break;
    }
    case FamilyTag::InfParallelTruncation: {
      if (n != 2 || m == 0) fail("needs two vertices and parallel arrows");
      for (const auto& a : arrows_)
        if (a.source != arrows_[0].source || a.target != arrows_[0].target || a.source == a.target)
          fail("arrows are not parallel");
      break;
    }
    case FamilyTag::Custom:
      break;
  }
}

std::string Quiver::to_text() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < vertices_.size(); ++i) os << (i ? " " : "") << vertices_[i];
  for (const auto& a : arrows_)
    os << "; " << a.id << ": " << vertices_[a.source] << " -> " << vertices_[a.target];
  if (tag_) os << "; @family " << to_string(*tag_);
  return os.str();
}

bool operator==(const Quiver& a, const Quiver& b) {
  if (a.vertices_ != b.vertices_ || a.tag_ != b.tag_ || a.arrows_.size() != b.arrows_.size())
    return false;
  for (std::size_t i = 0; i < a.arrows_.size(); ++i) {
    const Arrow& x = a.arrows_[i];
    const Arrow& y = b.arrows_[i];
    if (x.id != y.id || x.source != y.source || x.target != y.target) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Colon, Arrow, At, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Splits the text into statements (lists of tokens).
std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> statements(1);
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    i += k;
    col += k;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      statements.emplace_back();
      ++i;
      ++line;
      col = 1;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (c == ';') {
      statements.emplace_back();
      advance(1);
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == ':') {
      statements.back().push_back({Tok::Colon, ":", line, col});
      advance(1);
    } else if (c == '@') {
      statements.back().push_back({Tok::At, "@", line, col});
      advance(1);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      statements.back().push_back({Tok::Arrow, "->", line, col});
      advance(2);
    } else if (ident_char(c)) {
      const std::size_t start = i, start_col = col;
      while (i < text.size() && ident_char(text[i])) advance(1);
      statements.back().push_back(
          {Tok::Ident, std::string(text.substr(start, i - start)), line, start_col});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }
  return statements;
}

struct PendingArrow {
  Token id, source, target;
};

}  // namespace

Quiver parse_quiver(std::string_view text) {
  const auto statements = tokenize(text);
  std::vector<Token> vertices;
  std::vector<PendingArrow> arrows;
  std::optional<FamilyTag> tag;
  std::map<std::string, std::pair<std::size_t, std::size_t>> seen;  // id -> position
  auto declare = [&](const Token& t) {
    auto [it, fresh] = seen.emplace(t.text, std::make_pair(t.line, t.column));
    if (!fresh) throw ParseError("duplicate id '" + t.text + "'", t.line, t.column);
  };
  for (const auto& st : statements) {
    if (st.empty()) continue;
    if (st[0].kind == Tok::At) {
      if (st.size() != 3 || st[1].kind != Tok::Ident || st[1].text != "family" ||
          st[2].kind != Tok::Ident) {
        throw ParseError("expected '@family <tag>'", st[0].line, st[0].column);
      }
      if (tag) throw ParseError("family tag given twice", st[0].line, st[0].column);
      try {
        tag = parse_family_tag(st[2].text);
      } catch (const InvalidInput& e) {
        throw ParseError(e.what(), st[2].line, st[2].column);
      }
      continue;
    }
    if (st.size() >= 2 && st[1].kind == Tok::Colon) {
      const bool ok = st.size() == 5 && st[0].kind == Tok::Ident && st[2].kind == Tok::Ident &&
                      st[3].kind == Tok::Arrow && st[4].kind == Tok::Ident;
      if (!ok) {
        const Token& at = st.size() > 2 ? st[std::min<std::size_t>(st.size() - 1, 2)] : st[1];
        throw ParseError("expected '<id>: <source> -> <target>'", at.line, at.column);
      }
      declare(st[0]);
      arrows.push_back({st[0], st[2], st[4]});
      continue;
    }
    for (const auto& t : st) {
      if (t.kind != Tok::Ident) throw ParseError("unexpected '" + t.text + "'", t.line, t.column);
      declare(t);
      vertices.push_back(t);
    }
  }
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  for (const auto& v : vertices) {
    index[v.text] = names.size();
    names.push_back(v.text);
  }
  std::vector<Arrow> out;
  for (const auto& a : arrows) {
    for (const Token* end : {&a.source, &a.target}) {
      if (!index.count(end->text))
        throw ParseError("arrow '" + a.id.text + "' uses undeclared vertex '" + end->text + "'",
                         end->line, end->column);
    }
    out.push_back({a.id.text, index[a.source.text], index[a.target.text]});
  }
  return Quiver(names, out, tag);
}

// ---------------------------------------------------------------------------
// Paths

Path Path::of_arrow(const Quiver& q, std::size_t a) {
  const Arrow& ar = q.arrow(a);
  return {ar.source, ar.target, {a}};
}

Path Path::from_arrows(const Quiver& q, std::vector<std::size_t> arrows) {
  if (arrows.empty()) throw InvalidInput("use Path::trivial for the empty path");
  for (std::size_t i = 0; i + 1 < arrows.size(); ++i)
    if (q.arrow(arrows[i]).target != q.arrow(arrows[i + 1]).source)
      throw InvalidInput("arrows do not form a path");
  const std::size_t s = q.arrow(arrows.front()).source;
  const std::size_t t = q.arrow(arrows.back()).target;
  return {s, t, std::move(arrows)};
}

std::string Path::to_string(const Quiver& q) const {
  if (arrows.empty()) return "e_" + q.vertex_name(start);
  std::string out;
  for (auto it = arrows.rbegin(); it != arrows.rend(); ++it) {
    if (!out.empty()) out += '*';
    out += q.arrow(*it).id;
  }
  return out;
}

bool operator<(const Path& a, const Path& b) {
  if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
  if (a.arrows != b.arrows) return a.arrows < b.arrows;
  if (a.start != b.start) return a.start < b.start;
  return a.end < b.end;
}

std::optional<Path> compose(const Path& after, const Path& before) {
  if (before.end != after.start) return std::nullopt;
  Path p{before.start, after.end, before.arrows};
  p.arrows.insert(p.arrows.end(), after.arrows.begin(), after.arrows.end());
  return p;
}

std::vector<Path> paths_from(const Quiver& q, std::size_t v) {
  if (!q.is_acyclic()) throw Refusal("path enumeration refused: the quiver has an oriented cycle");
  if (v >= q.vertex_count()) throw InvalidInput("vertex index out of range");
  std::vector<Path> out;
  std::function<void(const Path&)> walk = [&](const Path& p) {
    out.push_back(p);
    for (auto a : q.outgoing(p.end)) walk(*compose(Path::of_arrow(q, a), p));
  };
  walk(Path::trivial(v));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Path> paths_between(const Quiver& q, std::size_t v, std::size_t w) {
  if (w >= q.vertex_count()) throw InvalidInput("vertex index out of range");
  std::vector<Path> out;
  for (auto& p : paths_from(q, v))
    if (p.end == w) out.push_back(std::move(p));
  return out;
}

// ---------------------------------------------------------------------------

QuiverClassification classify_quiver(const Quiver& q) {
  QuiverClassification c;
  c.acyclic = q.is_acyclic();
  const auto tag = q.tag();
  c.property_B = tag != FamilyTag::InfParallelTruncation;
  std::string b_note =
      c.property_B ? "" : "; (B) fails: the family has infinitely many arrows out of the source";
  if (!c.acyclic) {
    c.source_injective = TriState::No;
    c.reason =
        "oriented cycle: the cyclic-shift representation satisfies (i) and (ii) but is not "
        "injective";
    return c;
  }
  if (!tag || *tag == FamilyTag::A_n) {
    c.source_injective = TriState::Yes;
    c.reason = "finitely many vertices and no oriented cycles";
  } else if (*tag == FamilyTag::AInfTruncation) {
    c.source_injective = TriState::Yes;
    c.reason = "certified family: infinite line quiver";
  } else if (*tag == FamilyTag::BarrenTreeTruncation) {
    c.source_injective = TriState::Yes;
    c.reason = "certified family: infinite barren tree";
  } else if (*tag == FamilyTag::InfParallelTruncation) {
    c.source_injective = TriState::Yes;
    c.reason = "certified family: infinitely many parallel arrows";
  } else {
    c.source_injective = TriState::Unknown;
    c.reason = "truncation of an unclassified infinite quiver";
  }
  c.reason += b_note;
  return c;
}

}  // namespace qrep
