#include "prxml/format.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace prxml {

// -- S-expression reader -----------------------------------------------------

namespace {

struct SExpr {
  enum class Kind { List, Symbol, String };
  Kind kind = Kind::List;
  std::string text;          // Symbol/String payload
  std::vector<SExpr> items;  // List payload
  SourceSpan span;

  bool is_symbol(const char* s) const { return kind == Kind::Symbol && text == s; }
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  SExpr read_toplevel() {
    skip_space();
    SExpr e = read_expr();
    skip_space();
    if (pos_ < text_.size()) fail("trailing content after document", here());
    return e;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  [[noreturn]] void fail(const std::string& msg, SourceSpan span) {
    throw SyntaxError(msg, span);
  }

  SourceSpan here() const { return SourceSpan{pos_, pos_, line_, col_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_expr() {
    if (pos_ >= text_.size()) fail("unexpected end of input", here());
    char c = text_[pos_];
    if (c == '(') return read_list();
    if (c == ')') fail("unexpected ')'", here());
    if (c == '"') return read_string();
    return read_symbol();
  }

  SExpr read_list() {
    SExpr e;
    e.kind = SExpr::Kind::List;
    e.span = here();
    advance();  // '('
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) fail("unterminated '('", e.span);
      if (text_[pos_] == ')') {
        advance();
        break;
      }
      e.items.push_back(read_expr());
    }
    e.span.end = pos_;
    return e;
  }

  SExpr read_string() {
    SExpr e;
    e.kind = SExpr::Kind::String;
    e.span = here();
    advance();  // '"'
    for (;;) {
      if (pos_ >= text_.size()) fail("unterminated string", e.span);
      char c = text_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) fail("unterminated string", e.span);
        char esc = text_[pos_];
        if (esc == '"' || esc == '\\')
          e.text.push_back(esc);
        else
          fail(std::string("unknown escape '\\") + esc + "'", here());
        advance();
      } else {
        e.text.push_back(c);
        advance();
      }
    }
    e.span.end = pos_;
    return e;
  }

  static bool symbol_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-' ||
           c == '/' || c == '+';
  }

  SExpr read_symbol() {
    SExpr e;
    e.kind = SExpr::Kind::Symbol;
    e.span = here();
    while (pos_ < text_.size() && symbol_char(text_[pos_])) {
      e.text.push_back(text_[pos_]);
      advance();
    }
    if (e.text.empty()) fail(std::string("unexpected character '") + text_[pos_] + "'", here());
    e.span.end = pos_;
    return e;
  }
};

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-')
      return false;
  return true;
}

// -- Document reader -----------------------------------------------------------

class DocReader {
 public:
  explicit DocReader(const SExpr& root) : root_(root) {}

  PDocument read() {
    expect_list(root_, "prxml", 4, 4);
    PDocument doc;
    doc.events = read_events(root_.items[1]);
    events_ = &doc.events;
    doc.ordered = read_ordered(root_.items[2]);
    TreeNode tree = read_tree(root_.items[3]);
    if (tree.kind != NodeKind::Regular)
      fail("document root must be a regular node", root_.items[3].span);
    doc.nodes.clear();
    PDocument built = freeze(tree, doc.events, doc.ordered);
    auto violations = validate(built);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return built;
  }

 private:
  const SExpr& root_;
  const EventTable* events_ = nullptr;

  [[noreturn]] static void fail(const std::string& msg, SourceSpan span) {
    throw SyntaxError(msg, span);
  }

  static void expect_list(const SExpr& e, const char* head, std::size_t min_items,
                          std::size_t max_items) {
    if (e.kind != SExpr::Kind::List || e.items.empty() || !e.items[0].is_symbol(head))
      fail(std::string("expected (") + head + " ...)", e.span);
    if (e.items.size() < min_items || e.items.size() > max_items)
      fail(std::string("wrong number of elements in (") + head + " ...)", e.span);
  }

  static std::string read_identifier(const SExpr& e, const char* what) {
    if (e.kind != SExpr::Kind::Symbol || !valid_identifier(e.text))
      fail(std::string("expected ") + what, e.span);
    return e.text;
  }

  static Rational read_rational(const SExpr& e) {
    if (e.kind == SExpr::Kind::Symbol) {
      if (auto r = Rational::parse(e.text)) return *r;
    }
    fail("expected a rational number", e.span);
  }

  EventTable read_events(const SExpr& e) {
    if (e.kind != SExpr::Kind::List || e.items.empty() || !e.items[0].is_symbol("events"))
      fail("expected (events ...)", e.span);
    EventTable table;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const SExpr& decl = e.items[i];
      if (decl.kind != SExpr::Kind::List || decl.items.size() < 3)
        fail("expected (id bool RAT) or (id enum (VAL RAT)+)", decl.span);
      Event ev;
      ev.id = read_identifier(decl.items[0], "an event identifier");
      if (decl.items[1].is_symbol("bool")) {
        if (decl.items.size() != 3) fail("expected (id bool RAT)", decl.span);
        Rational p = read_rational(decl.items[2]);
        if (!p.in_open_unit_interval())
          fail("boolean event probability must lie strictly between 0 and 1",
               decl.items[2].span);
        ev.outcomes.emplace_back("t", p);
        ev.outcomes.emplace_back("f", Rational::one() - p);
      } else if (decl.items[1].is_symbol("enum")) {
        for (std::size_t j = 2; j < decl.items.size(); ++j) {
          const SExpr& pair = decl.items[j];
          if (pair.kind != SExpr::Kind::List || pair.items.size() != 2)
            fail("expected (VAL RAT)", pair.span);
          std::string value = read_identifier(pair.items[0], "an outcome value");
          ev.outcomes.emplace_back(value, read_rational(pair.items[1]));
        }
      } else {
        fail("expected 'bool' or 'enum'", decl.items[1].span);
      }
      table.events.push_back(std::move(ev));
    }
    return table;
  }

  static bool read_ordered(const SExpr& e) {
    expect_list(e, "ordered", 2, 2);
    if (e.items[1].is_symbol("true")) return true;
    if (e.items[1].is_symbol("false")) return false;
    fail("expected true or false", e.items[1].span);
  }

  void check_boolean_event(const std::string& id, SourceSpan span) const {
    const Event* ev = events_->find(id);
    if (!ev) fail("event '" + id + "' not declared", span);
    if (!ev->is_boolean()) fail("event '" + id + "' is not boolean", span);
  }

  EventLiteral read_literal(const SExpr& e) const {
    if (e.kind == SExpr::Kind::Symbol) {
      std::string id = read_identifier(e, "an event identifier");
      check_boolean_event(id, e.span);
      return EventLiteral{id, true};
    }
    if (e.kind == SExpr::Kind::List && e.items.size() == 2 && e.items[0].is_symbol("not") &&
        e.items[1].kind == SExpr::Kind::Symbol) {
      std::string id = read_identifier(e.items[1], "an event identifier");
      check_boolean_event(id, e.items[1].span);
      return EventLiteral{id, false};
    }
    fail("expected a literal: id or (not id)", e.span);
  }

  std::vector<EventLiteral> read_conjunction(const SExpr& e) const {
    if (e.kind != SExpr::Kind::List || e.items.empty() || !e.items[0].is_symbol("and"))
      fail("expected (and LIT*)", e.span);
    std::vector<EventLiteral> conj;
    for (std::size_t i = 1; i < e.items.size(); ++i) conj.push_back(read_literal(e.items[i]));
    return conj;
  }

  BoolFormula read_formula(const SExpr& e) const {
    if (e.kind == SExpr::Kind::Symbol) {
      EventLiteral lit = read_literal(e);
      return BoolFormula::literal(lit.event, lit.positive);
    }
    if (e.kind != SExpr::Kind::List || e.items.empty() ||
        e.items[0].kind != SExpr::Kind::Symbol)
      fail("expected a formula", e.span);
    const std::string& head = e.items[0].text;
    if (head == "not") {
      if (e.items.size() != 2) fail("(not ...) takes one argument", e.span);
      return BoolFormula::negate(read_formula(e.items[1]));
    }
    std::vector<BoolFormula> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(read_formula(e.items[i]));
    if (head == "and") return BoolFormula::conj(std::move(args));
    if (head == "or") return BoolFormula::disj(std::move(args));
    fail("expected (and ...), (or ...) or (not ...)", e.span);
  }

  std::string read_label(const SExpr& e) const {
    if (e.kind != SExpr::Kind::String) fail("expected a quoted label", e.span);
    if (e.text.empty()) fail("label must not be empty", e.span);
    if (e.text[0] == '#') fail("label prefix '#' is reserved", e.span);
    return e.text;
  }

  TreeNode read_tree(const SExpr& e) {
    if (e.kind != SExpr::Kind::List || e.items.empty() ||
        e.items[0].kind != SExpr::Kind::Symbol)
      fail("expected a tree node", e.span);
    const std::string& head = e.items[0].text;
    TreeNode t;
    if (head == "node") {
      if (e.items.size() < 2) fail("(node ...) needs a label", e.span);
      t.kind = NodeKind::Regular;
      t.label = read_label(e.items[1]);
      for (std::size_t i = 2; i < e.items.size(); ++i)
        t.children.emplace_back(std::monostate{}, read_tree(e.items[i]));
      return t;
    }
    if (head == "det") {
      t.kind = NodeKind::Det;
      for (std::size_t i = 1; i < e.items.size(); ++i)
        t.children.emplace_back(std::monostate{}, read_tree(e.items[i]));
      return t;
    }
    if (head == "ind" || head == "mux") {
      t.kind = head == "ind" ? NodeKind::Ind : NodeKind::Mux;
      Rational sum;
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& pair = e.items[i];
        if (pair.kind != SExpr::Kind::List || pair.items.size() != 2)
          fail("expected (RAT TREE)", pair.span);
        Rational p = read_rational(pair.items[0]);
        if (!p.in_open_unit_interval())
          fail("edge probability must lie strictly between 0 and 1", pair.items[0].span);
        sum += p;
        t.children.emplace_back(p, read_tree(pair.items[1]));
      }
      if (t.kind == NodeKind::Mux && sum > Rational::one())
        fail("mux branch probabilities sum to " + sum.str() + " > 1", e.span);
      return t;
    }
    if (head == "cie") {
      t.kind = NodeKind::Cie;
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& pair = e.items[i];
        if (pair.kind != SExpr::Kind::List || pair.items.size() != 2)
          fail("expected (CONJ TREE)", pair.span);
        t.children.emplace_back(read_conjunction(pair.items[0]), read_tree(pair.items[1]));
      }
      return t;
    }
    if (head == "fie") {
      t.kind = NodeKind::Fie;
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& pair = e.items[i];
        if (pair.kind != SExpr::Kind::List || pair.items.size() != 2)
          fail("expected (FORM TREE)", pair.span);
        t.children.emplace_back(read_formula(pair.items[0]), read_tree(pair.items[1]));
      }
      return t;
    }
    if (head == "mie") {
      t.kind = NodeKind::Mie;
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& pair = e.items[i];
        if (pair.kind != SExpr::Kind::List || pair.items.size() != 2)
          fail("expected ((id VAL) TREE)", pair.span);
        const SExpr& atom = pair.items[0];
        if (atom.kind != SExpr::Kind::List || atom.items.size() != 2)
          fail("expected (id VAL)", atom.span);
        MieAtom a;
        a.event = read_identifier(atom.items[0], "an event identifier");
        a.value = read_identifier(atom.items[1], "an outcome value");
        const Event* ev = events_->find(a.event);
        if (!ev) fail("event '" + a.event + "' not declared", atom.items[0].span);
        if (!ev->outcome_prob(a.value))
          fail("event '" + a.event + "' has no outcome '" + a.value + "'",
               atom.items[1].span);
        t.children.emplace_back(a, read_tree(pair.items[1]));
      }
      return t;
    }
    fail("unknown node kind '" + head + "'", e.items[0].span);
  }
};

}  // namespace

PDocument parse_prxml(const std::string& text) {
  SExpr root = Lexer(text).read_toplevel();
  return DocReader(root).read();
}

XDocument parse_xml(const std::string& text) {
  SExpr root = Lexer(text).read_toplevel();
  if (root.kind != SExpr::Kind::List || root.items.size() != 3 || !root.items[0].is_symbol("xml"))
    throw SyntaxError("expected (xml (ordered BOOL) TREE)", root.span);

  const SExpr& ord = root.items[1];
  if (ord.kind != SExpr::Kind::List || ord.items.size() != 2 || !ord.items[0].is_symbol("ordered"))
    throw SyntaxError("expected (ordered true|false)", ord.span);
  bool ordered;
  if (ord.items[1].is_symbol("true"))
    ordered = true;
  else if (ord.items[1].is_symbol("false"))
    ordered = false;
  else
    throw SyntaxError("expected true or false", ord.items[1].span);

  std::function<XTreeNode(const SExpr&)> read_tree = [&](const SExpr& e) -> XTreeNode {
    if (e.kind != SExpr::Kind::List || e.items.empty())
      throw SyntaxError("expected (node \"LABEL\" ...)", e.span);
    if (!e.items[0].is_symbol("node"))
      throw SyntaxError("deterministic trees allow only (node ...) elements", e.items[0].span);
    if (e.items.size() < 2 || e.items[1].kind != SExpr::Kind::String)
      throw SyntaxError("expected a quoted label", e.span);
    if (e.items[1].text.empty()) throw SyntaxError("label must not be empty", e.items[1].span);
    if (e.items[1].text[0] == '#')
      throw SyntaxError("label prefix '#' is reserved", e.items[1].span);
    XTreeNode t = XTreeNode::leaf(e.items[1].text);
    for (std::size_t i = 2; i < e.items.size(); ++i) t.children.push_back(read_tree(e.items[i]));
    return t;
  };
  return freeze(read_tree(root.items[2]), ordered);
}

std::vector<std::map<NodeId, NodeId>> parse_matches(const std::string& text) {
  SExpr root = Lexer(text).read_toplevel();
  if (root.kind != SExpr::Kind::List || root.items.empty() || !root.items[0].is_symbol("matches"))
    throw SyntaxError("expected (matches MATCH*)", root.span);

  auto read_id = [](const SExpr& e) -> NodeId {
    if (e.kind != SExpr::Kind::Symbol) throw SyntaxError("expected a node id", e.span);
    for (char c : e.text)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw SyntaxError("expected a node id", e.span);
    return std::stoi(e.text);
  };

  std::vector<std::map<NodeId, NodeId>> out;
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const SExpr& m = root.items[i];
    if (m.kind != SExpr::Kind::List) throw SyntaxError("expected ((w d) ...)", m.span);
    std::map<NodeId, NodeId> match;
    for (const SExpr& pair : m.items) {
      if (pair.kind != SExpr::Kind::List || pair.items.size() != 2)
        throw SyntaxError("expected (w-id d-id)", pair.span);
      NodeId w = read_id(pair.items[0]);
      NodeId d = read_id(pair.items[1]);
      if (match.count(w)) throw SyntaxError("duplicate w-id in match", pair.span);
      match[w] = d;
    }
    out.push_back(std::move(match));
  }
  return out;
}

// -- Serialization -------------------------------------------------------------

namespace {

std::string quote_label(const std::string& label) {
  std::string out = "\"";
  for (char c : label) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string literal_str(const EventLiteral& lit) {
  return lit.positive ? lit.event : "(not " + lit.event + ")";
}

std::string formula_str(const BoolFormula& f) {
  switch (f.op) {
    case BoolFormula::Op::Lit:
      return literal_str(f.lit);
    case BoolFormula::Op::Not:
      return "(not " + formula_str(f.args[0]) + ")";
    case BoolFormula::Op::And:
    case BoolFormula::Op::Or: {
      std::string out = f.op == BoolFormula::Op::And ? "(and" : "(or";
      for (const auto& a : f.args) out += " " + formula_str(a);
      return out + ")";
    }
  }
  return "";
}

std::string conj_str(const std::vector<EventLiteral>& conj) {
  std::string out = "(and";
  for (const auto& lit : conj) out += " " + literal_str(lit);
  return out + ")";
}

std::string annotation_str(const EdgeAnnotation& ann) {
  if (const auto* p = std::get_if<Rational>(&ann)) return p->str();
  if (const auto* c = std::get_if<std::vector<EventLiteral>>(&ann)) return conj_str(*c);
  if (const auto* f = std::get_if<BoolFormula>(&ann)) return formula_str(*f);
  if (const auto* a = std::get_if<MieAtom>(&ann)) return "(" + a->event + " " + a->value + ")";
  return "";
}

void serialize_node(const PDocument& doc, NodeId id, int indent, std::string& out) {
  const PNode& n = doc.node(id);
  std::string pad(2 * indent, ' ');
  out += pad + "(" + kind_name(n.kind);
  if (n.kind == NodeKind::Regular) out += " " + quote_label(n.label);
  for (const auto& e : n.edges) {
    out += "\n";
    if (std::holds_alternative<std::monostate>(e.ann)) {
      serialize_node(doc, e.child, indent + 1, out);
    } else {
      out += std::string(2 * (indent + 1), ' ') + "(" + annotation_str(e.ann) + "\n";
      serialize_node(doc, e.child, indent + 2, out);
      out += ")";
    }
  }
  out += ")";
}

void serialize_xnode(const XDocument& doc, NodeId id, int indent, std::string& out) {
  const XNode& n = doc.node(id);
  out += std::string(2 * indent, ' ') + "(node " + quote_label(n.label);
  for (NodeId c : n.children) {
    out += "\n";
    serialize_xnode(doc, c, indent + 1, out);
  }
  out += ")";
}

}  // namespace

std::string serialize(const PDocument& doc) {
  std::string out = "(prxml\n";
  if (doc.events.events.empty()) {
    out += "  (events)\n";
  } else {
    out += "  (events";
    for (const auto& e : doc.events.events) {
      out += "\n    (" + e.id;
      if (e.is_boolean()) {
        out += " bool " + e.outcome_prob("t")->str();
      } else {
        out += " enum";
        for (const auto& [v, p] : e.outcomes) out += " (" + v + " " + p.str() + ")";
      }
      out += ")";
    }
    out += ")\n";
  }
  out += std::string("  (ordered ") + (doc.ordered ? "true" : "false") + ")\n";
  serialize_node(doc, doc.root(), 1, out);
  out += ")\n";
  return out;
}

std::string serialize(const XDocument& doc) {
  std::string out = "(xml\n";
  out += std::string("  (ordered ") + (doc.ordered ? "true" : "false") + ")\n";
  serialize_xnode(doc, doc.root(), 1, out);
  out += ")\n";
  return out;
}

std::string serialize_matches(const std::vector<std::map<NodeId, NodeId>>& matches) {
  std::string out = "(matches";
  for (const auto& m : matches) {
    out += "\n  (";
    bool first = true;
    for (const auto& [w, d] : m) {
      if (!first) out += " ";
      out += "(" + std::to_string(w) + " " + std::to_string(d) + ")";
      first = false;
    }
    out += ")";
  }
  out += ")\n";
  return out;
}

static void compact_xnode(const XDocument& doc, NodeId id, std::string& out) {
  const XNode& n = doc.node(id);
  out += "(node " + quote_label(n.label);
  for (NodeId c : n.children) {
    out += " ";
    compact_xnode(doc, c, out);
  }
  out += ")";
}

std::string serialize_compact(const XDocument& doc) {
  std::string out;
  compact_xnode(doc, doc.root(), out);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace prxml
