#include "geoharvest/html/html.hpp"

#include <array>
#include <cctype>

#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/strings.hpp"

namespace geoharvest::html {

namespace {

bool is_void_element(std::string_view tag) {
  static const std::array<std::string_view, 14> kVoid = {
      "area", "base",  "br",    "col",  "embed",  "hr",    "img",
      "input", "link", "meta", "param", "source", "track", "wbr"};
  for (auto v : kVoid)
    if (tag == v) return true;
  return false;
}

bool is_rawtext_element(std::string_view tag) { return tag == "script" || tag == "style"; }

void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += s[i++];
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    if (name == "amp") out += '&';
    else if (name == "lt") out += '<';
    else if (name == "gt") out += '>';
    else if (name == "quot") out += '"';
    else if (name == "apos") out += '\'';
    else if (name == "nbsp") out += ' ';
    else if (name == "euro") out += "€";
    else if (name == "szlig") out += "ß";
    else if (name == "auml") out += "ä";
    else if (name == "ouml") out += "ö";
    else if (name == "uuml") out += "ü";
    else if (!name.empty() && name[0] == '#') {
      uint32_t cp = 0;
      bool ok = false;
      if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X')) {
        for (size_t k = 2; k < name.size(); ++k) {
          char c = name[k];
          int d = (c >= '0' && c <= '9')   ? c - '0'
                  : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                  : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                           : -1;
          if (d < 0) { ok = false; break; }
          cp = cp * 16 + static_cast<uint32_t>(d);
          ok = true;
        }
      } else {
        for (size_t k = 1; k < name.size(); ++k) {
          if (name[k] < '0' || name[k] > '9') { ok = false; break; }
          cp = cp * 10 + static_cast<uint32_t>(name[k] - '0');
          ok = true;
        }
      }
      if (!ok || cp == 0 || cp > 0x10FFFF) {
        out += s[i++];
        continue;
      }
      append_utf8(out, cp);
    } else {
      out += s[i++];  // unknown entity: keep verbatim
      continue;
    }
    i = semi + 1;
  }
  return out;
}

const std::string* Node::attr(std::string_view name) const {
  for (const auto& [k, v] : attrs)
    if (k == name) return &v;
  return nullptr;
}

bool Node::has_class(std::string_view cls) const {
  const std::string* v = attr("class");
  if (!v) return false;
  size_t i = 0;
  while (i < v->size()) {
    while (i < v->size() && std::isspace(static_cast<unsigned char>((*v)[i]))) ++i;
    size_t j = i;
    while (j < v->size() && !std::isspace(static_cast<unsigned char>((*v)[j]))) ++j;
    if (std::string_view(*v).substr(i, j - i) == cls) return true;
    i = j;
  }
  return false;
}

std::string Node::text_content() const {
  if (type == Type::text) return text;
  std::string out;
  for (const auto& c : children) {
    if (c->type == Type::comment) continue;
    out += c->text_content();
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view html) : s_(html) {}

  std::unique_ptr<Node> run() {
    auto root = std::make_unique<Node>();
    root->type = Node::Type::document;
    stack_.push_back(root.get());
    while (pos_ < s_.size()) step();
    return root;
  }

 private:
  void step() {
    if (s_[pos_] != '<') {
      emit_text_until('<');
      return;
    }
    if (starts_with("<!--")) {
      size_t end = s_.find("-->", pos_ + 4);
      auto n = make_node(Node::Type::comment);
      n->text = std::string(s_.substr(pos_ + 4, end == npos ? npos : end - pos_ - 4));
      append(std::move(n));
      pos_ = (end == npos) ? s_.size() : end + 3;
      return;
    }
    if (starts_with("<!") || starts_with("<?")) {  // doctype / processing inst.
      size_t end = s_.find('>', pos_);
      pos_ = (end == npos) ? s_.size() : end + 1;
      return;
    }
    if (starts_with("</")) {
      parse_close_tag();
      return;
    }
    if (pos_ + 1 < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_ + 1]))) {
      parse_open_tag();
      return;
    }
    // stray '<': literal text
    emit_text_char();
  }

  void parse_open_tag() {
    size_t i = pos_ + 1;
    size_t name_start = i;
    while (i < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i])) || s_[i] == '-')) ++i;
    std::string tag = str::to_lower(s_.substr(name_start, i - name_start));

    auto node = make_node(Node::Type::element);
    node->tag = tag;

    bool self_closing = false;
    while (i < s_.size() && s_[i] != '>') {
      if (std::isspace(static_cast<unsigned char>(s_[i]))) {
        ++i;
        continue;
      }
      if (s_[i] == '/') {
        self_closing = true;
        ++i;
        continue;
      }
      // attribute
      size_t a0 = i;
      while (i < s_.size() && s_[i] != '=' && s_[i] != '>' && s_[i] != '/' &&
             !std::isspace(static_cast<unsigned char>(s_[i])))
        ++i;
      std::string name = str::to_lower(s_.substr(a0, i - a0));
      std::string value;
      while (i < s_.size() && std::isspace(static_cast<unsigned char>(s_[i]))) ++i;
      if (i < s_.size() && s_[i] == '=') {
        ++i;
        while (i < s_.size() && std::isspace(static_cast<unsigned char>(s_[i]))) ++i;
        if (i < s_.size() && (s_[i] == '"' || s_[i] == '\'')) {
          char q = s_[i++];
          size_t v0 = i;
          while (i < s_.size() && s_[i] != q) ++i;
          value = decode_entities(s_.substr(v0, i - v0));
          if (i < s_.size()) ++i;
        } else {
          size_t v0 = i;
          while (i < s_.size() && s_[i] != '>' && !std::isspace(static_cast<unsigned char>(s_[i])))
            ++i;
          value = decode_entities(s_.substr(v0, i - v0));
        }
      }
      if (!name.empty()) node->attrs.emplace_back(std::move(name), std::move(value));
    }
    pos_ = (i < s_.size()) ? i + 1 : s_.size();

    Node* raw = node.get();
    append(std::move(node));

    if (self_closing || is_void_element(tag)) return;

    if (is_rawtext_element(tag)) {
      consume_raw_text(raw, tag);
      return;
    }
    stack_.push_back(raw);
  }

  // script/style content is opaque: no entity decoding, no nested tags.
  void consume_raw_text(Node* element, const std::string& tag) {
    std::string close = "</" + tag;
    size_t end = pos_;
    while (true) {
      end = find_ci(close, end);
      if (end == npos) {
        end = s_.size();
        break;
      }
      size_t after = end + close.size();
      if (after >= s_.size() || s_[after] == '>' ||
          std::isspace(static_cast<unsigned char>(s_[after])))
        break;
      ++end;
    }
    auto txt = std::make_unique<Node>();
    txt->type = Node::Type::text;
    txt->text = std::string(s_.substr(pos_, end - pos_));
    txt->parent = element;
    element->children.push_back(std::move(txt));
    if (end < s_.size()) {
      size_t gt = s_.find('>', end);
      pos_ = (gt == npos) ? s_.size() : gt + 1;
    } else {
      pos_ = s_.size();
    }
  }

  void parse_close_tag() {
    size_t i = pos_ + 2;
    size_t name_start = i;
    while (i < s_.size() && s_[i] != '>') ++i;
    std::string tag = str::to_lower(str::trim(s_.substr(name_start, i - name_start)));
    pos_ = (i < s_.size()) ? i + 1 : s_.size();

    // pop to the matching open element; ignore unmatched close tags
    for (size_t d = stack_.size(); d-- > 1;) {
      if (stack_[d]->tag == tag) {
        stack_.resize(d);
        return;
      }
    }
  }

  void emit_text_until(char stop) {
    size_t end = s_.find(stop, pos_);
    if (end == npos) end = s_.size();
    std::string decoded = decode_entities(s_.substr(pos_, end - pos_));
    if (!decoded.empty()) {
      auto n = make_node(Node::Type::text);
      n->text = std::move(decoded);
      append(std::move(n));
    }
    pos_ = end;
  }

  void emit_text_char() {
    auto n = make_node(Node::Type::text);
    n->text = std::string(1, s_[pos_++]);
    append(std::move(n));
  }

  std::unique_ptr<Node> make_node(Node::Type t) {
    auto n = std::make_unique<Node>();
    n->type = t;
    return n;
  }

  void append(std::unique_ptr<Node> n) {
    n->parent = stack_.back();
    stack_.back()->children.push_back(std::move(n));
  }

  bool starts_with(std::string_view prefix) const {
    return s_.substr(pos_, prefix.size()) == prefix;
  }

  size_t find_ci(const std::string& needle, size_t from) const {
    if (needle.empty()) return from;
    for (size_t i = from; i + needle.size() <= s_.size(); ++i) {
      if (str::iequals(s_.substr(i, needle.size()), needle)) return i;
    }
    return npos;
  }

  static constexpr size_t npos = std::string_view::npos;
  std::string_view s_;
  size_t pos_ = 0;
  std::vector<Node*> stack_;
};

}  // namespace

Document Document::parse(std::string_view html) {
  Document d;
  d.root_ = Parser(html).run();
  return d;
}

bool Selector::Compound::matches(const Node& n) const {
  if (n.type != Node::Type::element) return false;
  if (!tag.empty() && n.tag != tag) return false;
  if (!id.empty()) {
    const std::string* v = n.attr("id");
    if (!v || *v != id) return false;
  }
  for (const auto& c : classes)
    if (!n.has_class(c)) return false;
  for (const auto& [name, want] : attrs) {
    const std::string* v = n.attr(name);
    if (!v) return false;
    if (want && *v != *want) return false;
  }
  return true;
}

Selector Selector::parse(std::string_view expr) {
  Selector sel;
  sel.expr_ = std::string(expr);
  size_t i = 0;
  Combinator pending = Combinator::none;
  bool first = true;

  auto skip_ws = [&] {
    while (i < expr.size() && std::isspace(static_cast<unsigned char>(expr[i]))) ++i;
  };

  skip_ws();
  while (i < expr.size()) {
    if (!first) {
      bool saw_ws = false;
      while (i < expr.size() && std::isspace(static_cast<unsigned char>(expr[i]))) {
        saw_ws = true;
        ++i;
      }
      if (i < expr.size() && expr[i] == '>') {
        pending = Combinator::child;
        ++i;
        skip_ws();
      } else if (saw_ws) {
        pending = Combinator::descendant;
      }
      if (i >= expr.size()) break;
    }

    Compound c;
    bool any_part = false;
    while (i < expr.size()) {
      char ch = expr[i];
      if (ch == '.' || ch == '#') {
        ++i;
        size_t j = i;
        while (j < expr.size() && (std::isalnum(static_cast<unsigned char>(expr[j])) ||
                                   expr[j] == '-' || expr[j] == '_'))
          ++j;
        if (j == i) throw ParseError("selector: empty class/id name in '" + sel.expr_ + "'");
        std::string name(expr.substr(i, j - i));
        if (ch == '.') c.classes.push_back(std::move(name));
        else c.id = std::move(name);
        i = j;
        any_part = true;
      } else if (ch == '[') {
        size_t close = expr.find(']', i);
        if (close == std::string_view::npos)
          throw ParseError("selector: unterminated attribute in '" + sel.expr_ + "'");
        std::string_view inside = expr.substr(i + 1, close - i - 1);
        auto eq = inside.find('=');
        if (eq == std::string_view::npos) {
          c.attrs.emplace_back(str::to_lower(str::trim(inside)), std::nullopt);
        } else {
          std::string_view val = str::trim(inside.substr(eq + 1));
          if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') &&
              val.back() == val.front())
            val = val.substr(1, val.size() - 2);
          c.attrs.emplace_back(str::to_lower(str::trim(inside.substr(0, eq))),
                               std::string(val));
        }
        i = close + 1;
        any_part = true;
      } else if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' ||
                 ch == '*') {
        size_t j = i;
        if (ch == '*') {
          j = i + 1;
          c.tag.clear();
        } else {
          while (j < expr.size() && (std::isalnum(static_cast<unsigned char>(expr[j])) ||
                                     expr[j] == '-' || expr[j] == '_'))
            ++j;
          c.tag = str::to_lower(expr.substr(i, j - i));
        }
        i = j;
        any_part = true;
      } else {
        break;
      }
    }
    if (!any_part) throw ParseError("selector: unexpected character in '" + sel.expr_ + "'");
    sel.parts_.emplace_back(first ? Combinator::none : pending, std::move(c));
    first = false;
    pending = Combinator::none;
  }
  if (sel.parts_.empty()) throw ParseError("selector: empty expression");
  return sel;
}

bool Selector::matches(const Node& n) const { return matches_from(n, parts_.size() - 1); }

bool Selector::matches_from(const Node& n, size_t idx) const {
  if (!parts_[idx].second.matches(n)) return false;
  if (idx == 0) return true;

  const Combinator comb = parts_[idx].first;
  const Node* p = n.parent;
  if (comb == Combinator::child) {
    return p && matches_from(*p, idx - 1);
  }
  // descendant
  while (p) {
    if (matches_from(*p, idx - 1)) return true;
    p = p->parent;
  }
  return false;
}

namespace {
void collect(const Node& n, const Selector& sel, std::vector<const Node*>& out) {
  if (n.type == Node::Type::element && sel.matches(n)) out.push_back(&n);
  for (const auto& c : n.children) collect(*c, sel, out);
}
}  // namespace

std::vector<const Node*> select_all(const Node& scope, const Selector& sel) {
  std::vector<const Node*> out;
  collect(scope, sel, out);
  return out;
}

const Node* select_first(const Node& scope, const Selector& sel) {
  auto all = select_all(scope, sel);
  return all.empty() ? nullptr : all.front();
}

std::string inner_text(const Node& n) { return str::collapse_ws(n.text_content()); }

}  // namespace geoharvest::html
