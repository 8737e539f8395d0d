#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "stagedtree/tree/tree.hpp"

namespace staged::tree {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the line-oriented tree language:
///   stage <id> : <label> ... ;
///   vertex <id> stage <stage-id> children <vertex-id> ... ;
///   vertex <id> leaf ;
///   root <vertex-id> ;
/// Syntax problems raise ParseError, structural ones TreeError.
StagedTree parse_tree(std::string_view text);
StagedTree load_tree(const std::string& path);

/// Canonical text: stages sorted by id, then vertices depth-first, then root.
std::string serialize(const StagedTree& t);

/// Graphviz rendering, one fill colour per stage.
std::string to_dot(const StagedTree& t);

}  // namespace staged::tree
