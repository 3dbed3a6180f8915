#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Tolerant tag-soup HTML parser plus a CSS-selector subset, sized for
// rule-driven field extraction from listing-style pages.
namespace geoharvest::html {

class Node {
 public:
  enum class Type { document, element, text, comment };

  Type type = Type::element;
  std::string tag;  // lowercase; element nodes only
  std::vector<std::pair<std::string, std::string>> attrs;
  std::string text;  // text/comment nodes
  std::vector<std::unique_ptr<Node>> children;
  const Node* parent = nullptr;

  const std::string* attr(std::string_view name) const;
  bool has_class(std::string_view cls) const;

  // Raw concatenation of descendant text nodes.
  std::string text_content() const;
};

class Document {
 public:
  // Never throws: unparseable constructs degrade to text or get skipped.
  static Document parse(std::string_view html);

  const Node& root() const { return *root_; }
  Node& root() { return *root_; }

 private:
  std::unique_ptr<Node> root_;
};

// Selector grammar: compound selectors made of tag, #id, .class, [attr] and
// [attr=value] parts, joined by descendant (whitespace) or child (>)
// combinators. Example: "section.facts > dl.hardfacts dd.rent".
class Selector {
 public:
  static Selector parse(std::string_view expr);  // throws ParseError

  bool matches(const Node& n) const;
  const std::string& expression() const { return expr_; }

 private:
  struct Compound {
    std::string tag;  // empty = any
    std::string id;
    std::vector<std::string> classes;
    std::vector<std::pair<std::string, std::optional<std::string>>> attrs;
    bool matches(const Node& n) const;
  };
  enum class Combinator { none, descendant, child };

  bool matches_from(const Node& n, size_t idx) const;

  std::string expr_;
  std::vector<std::pair<Combinator, Compound>> parts_;
};

std::vector<const Node*> select_all(const Node& scope, const Selector& sel);
const Node* select_first(const Node& scope, const Selector& sel);

// Whitespace-collapsed text of a subtree.
std::string inner_text(const Node& n);

// Decodes the common named entities plus numeric character references.
std::string decode_entities(std::string_view s);

}  // namespace geoharvest::html
