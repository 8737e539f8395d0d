#include "stagedtree/tree/dsl.hpp"

#include <fstream>
#include <sstream>

namespace staged::tree {

namespace {

struct Token {
  std::string text;
  int line;
  int column;
};

bool is_punct(char c) { return c == ';' || c == ':'; }

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
    } else if (is_punct(c)) {
      out.push_back({std::string(1, c), line, col});
      ++i;
      ++col;
    } else {
      int start = col;
      std::string word;
      while (i < src.size()) {
        char d = src[i];
        if (d == '\n' || d == ' ' || d == '\t' || d == '\r' || d == '#' || is_punct(d)) break;
        word.push_back(d);
        ++i;
        // Count UTF-8 code points, not bytes.
        if ((static_cast<unsigned char>(d) & 0xC0) != 0x80) ++col;
      }
      out.push_back({word, line, start});
    }
  }
  out.push_back({"", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  StagedTree run() {
    if (toks_.size() == 1) fail(toks_[0], "empty input: expected 'stage', 'vertex' or 'root'");
    TreeBuilder b;
    bool have_root = false;
    while (!at_end()) {
      const Token& kw = next();
      if (kw.text == "stage") {
        std::string id = ident("stage id");
        expect(":");
        std::vector<std::string> labels;
        while (!peek_is(";")) labels.push_back(ident("label"));
        if (labels.empty()) fail(peek(), "stage '" + id + "' needs at least one label");
        expect(";");
        b.stage(id, std::move(labels));
      } else if (kw.text == "vertex") {
        std::string id = ident("vertex id");
        const Token& k = next();
        if (k.text == "leaf") {
          expect(";");
          b.leaf(id);
        } else if (k.text == "stage") {
          std::string st = ident("stage id");
          const Token& ch = next();
          if (ch.text != "children") fail(ch, "expected 'children', found " + describe(ch));
          std::vector<std::string> kids;
          while (!peek_is(";")) kids.push_back(ident("child vertex id"));
          if (kids.empty()) fail(peek(), "vertex '" + id + "' needs at least one child");
          expect(";");
          b.internal(id, st, std::move(kids));
        } else {
          fail(k, "expected 'leaf' or 'stage', found " + describe(k));
        }
      } else if (kw.text == "root") {
        if (have_root) fail(kw, "root declared twice");
        std::string id = ident("root vertex id");
        expect(";");
        b.root(id);
        have_root = true;
      } else {
        fail(kw, "expected 'stage', 'vertex' or 'root', found " + describe(kw));
      }
    }
    if (!have_root) fail(toks_.back(), "missing 'root' declaration");
    return b.build();
  }

 private:
  bool at_end() const { return pos_ + 1 >= toks_.size(); }
  const Token& peek() const { return toks_[pos_]; }
  bool peek_is(const std::string& s) const { return !at_end() && peek().text == s; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (!at_end()) ++pos_;
    return t;
  }
  static std::string describe(const Token& t) { return t.text.empty() ? "end of input" : "'" + t.text + "'"; }
  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.line, t.column, msg); }
  void expect(const std::string& s) {
    const Token& t = next();
    if (t.text != s) fail(t, "expected '" + s + "', found " + describe(t));
  }
  std::string ident(const std::string& what) {
    const Token& t = next();
    if (t.text.empty() || (t.text.size() == 1 && is_punct(t.text[0]))) fail(t, "expected " + what + ", found " + describe(t));
    return t.text;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

const char* kPalette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
                          "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"};

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

StagedTree parse_tree(std::string_view text) { return Parser(tokenize(text)).run(); }

StagedTree load_tree(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tree(ss.str());
}

std::string serialize(const StagedTree& t) {
  std::ostringstream out;
  for (const auto& s : t.stages()) {
    out << "stage " << s.id << " :";
    for (const auto& l : s.labels) out << ' ' << l;
    out << " ;\n";
  }
  for (const auto& v : t.vertices()) {
    out << "vertex " << v.name;
    if (v.is_leaf()) {
      out << " leaf ;\n";
      continue;
    }
    out << " stage " << t.stage(v.stage).id << " children";
    for (int c : v.children) out << ' ' << t.vertex(c).name;
    out << " ;\n";
  }
  out << "root " << t.vertex(t.root()).name << " ;\n";
  return out.str();
}

std::string to_dot(const StagedTree& t) {
  std::ostringstream out;
  out << "digraph staged_tree {\n  node [style=filled];\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Vertex& v = t.vertex(static_cast<int>(i));
    out << "  v" << i << " [label=" << dot_quote(v.name);
    if (v.is_leaf()) {
      out << ", shape=box, fillcolor=\"#ffffff\"";
    } else if (t.is_z_stage(v.stage)) {
      out << ", shape=circle, fillcolor=\"#eeeeee\"";
    } else {
      out << ", shape=circle, fillcolor=\"" << kPalette[v.stage % (sizeof(kPalette) / sizeof(kPalette[0]))] << "\"";
    }
    out << "];\n";
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Vertex& v = t.vertex(static_cast<int>(i));
    for (std::size_t j = 0; j < v.children.size(); ++j)
      out << "  v" << i << " -> v" << v.children[j] << " [label=" << dot_quote(t.edge_label(static_cast<int>(i), j))
          << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace staged::tree
