// Copyright 2026 The meros-tools Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "meros/text_format.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <optional>
#include <set>
#include <utility>

namespace meros {

std::string format_diagnostic(const ParseDiagnostic& diagnostic) {
  return std::to_string(diagnostic.span.line) + ":" +
         std::to_string(diagnostic.span.column) + ": " +
         std::string(to_string(diagnostic.severity)) + ": " +
         diagnostic.message;
}

namespace {

constexpr int kMaxNesting = 64;

enum class TokenKind { Ident, String, LBrace, RBrace, Colon, Semi, Arrow, Slash, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // identifier text or decoded string value
  SourceSpan span;
};

struct SyntaxError {
  SourceSpan span;
  std::string message;
};

bool is_ident_start(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(unsigned char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '/';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void append_utf8(std::string& out, unsigned code) {
  if (code < 0x80) {
    out.push_back(static_cast<char>(code));
  } else if (code < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (code >> 6)));
    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xE0 | (code >> 12)));
    out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      skip_trivia();
      if (pos_ >= text_.size()) {
        tokens.push_back({TokenKind::End, {}, {line_, column_, 1}});
        return tokens;
      }
      tokens.push_back(next());
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token punct(TokenKind kind, int length) {
    Token token{kind, {}, {line_, column_, length}};
    for (int i = 0; i < length; ++i) advance();
    return token;
  }

  Token next() {
    const auto c = static_cast<unsigned char>(text_[pos_]);
    switch (c) {
      case '{': return punct(TokenKind::LBrace, 1);
      case '}': return punct(TokenKind::RBrace, 1);
      case ':': return punct(TokenKind::Colon, 1);
      case ';': return punct(TokenKind::Semi, 1);
      case '/': return punct(TokenKind::Slash, 1);
      case '"': return string_literal();
      default: break;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      return punct(TokenKind::Arrow, 2);
    }
    if (is_ident_start(c)) {
      Token token{TokenKind::Ident, {}, {line_, column_, 0}};
      while (pos_ < text_.size() &&
             is_ident_char(static_cast<unsigned char>(text_[pos_]))) {
        token.text.push_back(text_[pos_]);
        advance();
      }
      token.span.length = static_cast<int>(token.text.size());
      return token;
    }
    throw SyntaxError{{line_, column_, 1}, "unexpected character"};
  }

  Token string_literal() {
    Token token{TokenKind::String, {}, {line_, column_, 1}};
    const std::size_t start = pos_;
    advance();  // opening quote
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') {
        throw SyntaxError{token.span, "unterminated string"};
      }
      char c = text_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c != '\\') {
        token.text.push_back(c);
        advance();
        continue;
      }
      SourceSpan escape_span{line_, column_, 2};
      advance();
      if (pos_ >= text_.size()) throw SyntaxError{token.span, "unterminated string"};
      char e = text_[pos_];
      switch (e) {
        case '"': token.text.push_back('"'); break;
        case '\\': token.text.push_back('\\'); break;
        case 'n': token.text.push_back('\n'); break;
        case 't': token.text.push_back('\t'); break;
        case 'r': token.text.push_back('\r'); break;
        case 'u': {
          unsigned code = 0;
          for (int i = 1; i <= 4; ++i) {
            int h = pos_ + i < text_.size() ? hex_value(text_[pos_ + i]) : -1;
            if (h < 0) throw SyntaxError{escape_span, "invalid \\u escape"};
            code = code * 16 + static_cast<unsigned>(h);
          }
          if (code >= 0xD800 && code <= 0xDFFF) {
            throw SyntaxError{escape_span, "invalid \\u escape"};
          }
          append_utf8(token.text, code);
          for (int i = 0; i < 4; ++i) advance();
          break;
        }
        default:
          throw SyntaxError{escape_span, "invalid escape sequence"};
      }
      advance();
    }
    token.span.length = static_cast<int>(pos_ - start);
    return token;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// Names already declared in one intrasystem block.
struct Scope {
  std::set<std::string> components;
  std::set<std::string> topics;
  std::set<std::string> services;
  std::set<std::string> actions;
  std::set<std::string> mediums;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  RosSystem run() {
    RosSystem model;
    std::set<std::string> systems;
    std::set<std::string> workspaces;
    while (peek().kind != TokenKind::End) {
      const Token& keyword = expect_keyword("'system' or 'workspace'");
      if (keyword.text == "system") {
        model.running_systems.push_back(parse_system(systems));
      } else if (keyword.text == "workspace") {
        model.workspaces.push_back(parse_workspace(workspaces));
      } else {
        fail(keyword, "unknown keyword '" + keyword.text + "'");
      }
    }
    return model;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  const Token& take() {
    const Token& token = tokens_[pos_];
    if (token.kind != TokenKind::End) ++pos_;
    return token;
  }

  [[noreturn]] void fail(const Token& token, std::string message) {
    throw SyntaxError{token.span, std::move(message)};
  }

  const Token& expect(TokenKind kind, std::string_view what) {
    if (peek().kind != kind) fail(peek(), "expected " + std::string(what));
    return take();
  }

  const Token& expect_keyword(std::string_view what) {
    if (peek().kind != TokenKind::Ident) {
      fail(peek(), "unexpected token, expected " + std::string(what));
    }
    return take();
  }

  std::string expect_string(std::string_view what) {
    return expect(TokenKind::String, what).text;
  }

  std::string expect_name(std::string_view what) {
    const Token& token = expect(TokenKind::String, what);
    if (token.text.empty()) fail(token, "empty name");
    return token.text;
  }

  bool accept_keyword(std::string_view word) {
    if (peek().kind == TokenKind::Ident && peek().text == word) {
      take();
      return true;
    }
    return false;
  }

  void claim(std::set<std::string>& names, const std::string& name,
             const Token& at, std::string_view what) {
    if (!names.insert(name).second) {
      fail(at, "duplicate " + std::string(what) + " '" + name + "'");
    }
  }

  RunningSystem parse_system(std::set<std::string>& systems) {
    const Token& name_token = peek();
    RunningSystem system;
    system.name = expect_name("system name");
    claim(systems, system.name, name_token, "system");
    system.compact = accept_keyword("compact");
    expect(TokenKind::LBrace, "'{'");
    parse_items(system, 0);
    if (!system.compact) {
      for (auto name : {kMasterName, kRosoutName}) {
        bool present = std::any_of(
            system.components.begin(), system.components.end(),
            [&](const auto& c) { return c.name == name; });
        if (!present) {
          system.components.push_back(
              make_component(std::string(name), ComponentKind::Node));
        }
      }
    }
    return system;
  }

  // Parses items up to and including the closing brace.
  void parse_items(Intrasystem& system, int depth) {
    Scope scope;
    for (;;) {
      if (peek().kind == TokenKind::RBrace) {
        take();
        return;
      }
      const Token& keyword = expect_keyword("declaration or '}'");
      const std::string& word = keyword.text;
      if (auto kind = component_kind(word)) {
        parse_component(system, scope, *kind);
      } else if (word == "intrasystem") {
        if (depth + 1 > kMaxNesting) fail(keyword, "intrasystem nesting too deep");
        const Token& name_token = peek();
        Intrasystem nested;
        nested.name = expect_name("intrasystem name");
        claim(scope.components, nested.name, name_token, "component");
        expect(TokenKind::LBrace, "'{'");
        parse_items(nested, depth + 1);
        system.components.push_back(make_intrasystem_component(std::move(nested)));
      } else if (word == "topic") {
        const Token& name_token = peek();
        Topic topic;
        topic.name = expect_name("topic name");
        claim(scope.topics, normalize_channel(topic.name), name_token, "topic");
        expect(TokenKind::Colon, "':'");
        topic.message = expect_string("message type");
        expect(TokenKind::Semi, "';'");
        system.declared_topics.push_back(std::move(topic));
      } else if (word == "service") {
        const Token& name_token = peek();
        Service service;
        service.name = expect_name("service name");
        claim(scope.services, normalize_channel(service.name), name_token,
              "service");
        expect(TokenKind::Colon, "':'");
        service.data.request = expect_string("request type");
        expect(TokenKind::Arrow, "'->'");
        service.data.response = expect_string("response type");
        expect(TokenKind::Semi, "';'");
        system.declared_services.push_back(std::move(service));
      } else if (word == "action") {
        const Token& name_token = peek();
        Action action;
        action.name = expect_name("action name");
        claim(scope.actions, normalize_channel(action.name), name_token, "action");
        expect(TokenKind::Colon, "':'");
        action.data.goal = expect_string("goal type");
        expect(TokenKind::Slash, "'/'");
        action.data.feedback = expect_string("feedback type");
        expect(TokenKind::Slash, "'/'");
        action.data.result = expect_string("result type");
        expect(TokenKind::Semi, "';'");
        system.declared_actions.push_back(std::move(action));
      } else if (word == "medium") {
        system.mediums.push_back(parse_medium(scope));
      } else {
        fail(keyword, "unknown keyword '" + word + "'");
      }
    }
  }

  static std::optional<ComponentKind> component_kind(const std::string& word) {
    if (word == "node") return ComponentKind::Node;
    if (word == "nodelet") return ComponentKind::Nodelet;
    if (word == "plugin") return ComponentKind::Plugin;
    if (word == "library") return ComponentKind::Library;
    if (word == "nonros") return ComponentKind::NonRos;
    return std::nullopt;
  }

  static std::optional<PortDirection> port_direction(const std::string& word) {
    if (word == "publishes") return PortDirection::Publish;
    if (word == "subscribes") return PortDirection::Subscribe;
    if (word == "serves") return PortDirection::Serve;
    if (word == "calls") return PortDirection::Call;
    if (word == "provides_action") return PortDirection::ActionServe;
    if (word == "uses_action") return PortDirection::ActionCall;
    if (word == "nonros_link") return PortDirection::NonRos;
    return std::nullopt;
  }

  static std::optional<ConnectionKind> connection_kind(const std::string& word) {
    if (word == "topic") return ConnectionKind::Topic;
    if (word == "service") return ConnectionKind::Service;
    if (word == "action") return ConnectionKind::Action;
    if (word == "nonros") return ConnectionKind::NonRos;
    return std::nullopt;
  }

  void parse_component(Intrasystem& system, Scope& scope, ComponentKind kind) {
    const Token& name_token = peek();
    CommunicatingComponent component;
    component.kind = kind;
    component.name = expect_name("component name");
    claim(scope.components, component.name, name_token, "component");
    if (peek().kind == TokenKind::Ident && peek().text == "manager") {
      if (kind != ComponentKind::Nodelet) {
        fail(peek(), "'manager' is only allowed on nodelets");
      }
      take();
      component.manager = expect_name("manager name");
    }
    if (peek().kind == TokenKind::Ident && peek().text == "host") {
      if (kind != ComponentKind::Plugin) {
        fail(peek(), "'host' is only allowed on plugins");
      }
      take();
      component.host = expect_name("host name");
    }
    expect(TokenKind::LBrace, "'{'");
    std::set<std::pair<PortDirection, std::string>> seen;
    while (peek().kind != TokenKind::RBrace) {
      const Token& keyword = expect_keyword("port direction or '}'");
      auto direction = port_direction(keyword.text);
      if (!direction) fail(keyword, "unknown keyword '" + keyword.text + "'");
      const Token& channel_token = peek();
      Port port;
      port.direction = *direction;
      port.channel = expect_string("channel name");
      if (port.channel.empty()) fail(channel_token, "empty channel name");
      std::string key = *direction == PortDirection::NonRos
                            ? port.channel
                            : normalize_channel(port.channel);
      if (!seen.emplace(*direction, key).second) {
        fail(channel_token, "duplicate port '" + port.channel + "'");
      }
      expect(TokenKind::Colon, "':'");
      port.payload_type = expect_string("payload type");
      expect(TokenKind::Semi, "';'");
      component.ports.push_back(std::move(port));
    }
    take();
    system.components.push_back(std::move(component));
  }

  CommMedium parse_medium(Scope& scope) {
    const Token& name_token = peek();
    CommMedium medium;
    medium.name = expect_name("medium name");
    claim(scope.mediums, medium.name, name_token, "medium");
    expect(TokenKind::LBrace, "'{'");
    std::set<std::pair<ConnectionKind, std::string>> seen;
    while (peek().kind != TokenKind::RBrace) {
      const Token& keyword = expect_keyword("member kind or '}'");
      auto kind = connection_kind(keyword.text);
      if (!kind) fail(keyword, "unknown keyword '" + keyword.text + "'");
      const Token& channel_token = peek();
      ConnectionRef ref{*kind, expect_name("channel name")};
      std::string key = *kind == ConnectionKind::NonRos
                            ? ref.channel
                            : normalize_channel(ref.channel);
      if (!seen.emplace(*kind, key).second) {
        fail(channel_token, "duplicate medium member '" + ref.channel + "'");
      }
      expect(TokenKind::Semi, "';'");
      medium.members.push_back(std::move(ref));
    }
    take();
    return medium;
  }

  Workspace parse_workspace(std::set<std::string>& workspaces) {
    const Token& name_token = peek();
    Workspace workspace;
    workspace.name = expect_name("workspace name");
    claim(workspaces, workspace.name, name_token, "workspace");
    expect(TokenKind::LBrace, "'{'");
    std::set<std::string> packages;
    while (peek().kind != TokenKind::RBrace) {
      const Token& keyword = expect_keyword("'package', 'metapackage' or '}'");
      if (keyword.text == "package") {
        workspace.packages.push_back(parse_package(packages));
      } else if (keyword.text == "metapackage") {
        workspace.metapackages.push_back(parse_metapackage(packages));
      } else {
        fail(keyword, "unknown keyword '" + keyword.text + "'");
      }
    }
    take();
    return workspace;
  }

  Package parse_package(std::set<std::string>& packages) {
    const Token& name_token = peek();
    Package package;
    package.name = expect_name("package name");
    claim(packages, package.name, name_token, "package");
    expect(TokenKind::LBrace, "'{'");
    std::set<std::pair<std::string, std::string>> seen;
    while (peek().kind != TokenKind::RBrace) {
      const Token& keyword = expect_keyword("artifact kind or '}'");
      std::vector<std::string>* list = artifact_list(package, keyword.text);
      if (!list) fail(keyword, "unknown keyword '" + keyword.text + "'");
      const Token& value_token = peek();
      std::string value = expect_name("artifact name");
      if (!seen.emplace(keyword.text, value).second) {
        fail(value_token, "duplicate " + keyword.text + " '" + value + "'");
      }
      expect(TokenKind::Semi, "';'");
      list->push_back(std::move(value));
    }
    take();
    return package;
  }

  static std::vector<std::string>* artifact_list(Package& p,
                                                 const std::string& word) {
    if (word == "node") return &p.nodes;
    if (word == "nodelet") return &p.nodelets;
    if (word == "plugin") return &p.plugins;
    if (word == "library") return &p.libraries;
    if (word == "msg") return &p.msg_data;
    if (word == "srv") return &p.srv_data;
    if (word == "actiondef") return &p.action_data;
    if (word == "misc") return &p.misc;
    return nullptr;
  }

  Metapackage parse_metapackage(std::set<std::string>& packages) {
    const Token& name_token = peek();
    Metapackage meta;
    meta.name = expect_name("metapackage name");
    claim(packages, meta.name, name_token, "package");
    expect(TokenKind::LBrace, "'{'");
    std::set<std::string> members;
    std::set<std::string> files;
    while (peek().kind != TokenKind::RBrace) {
      const Token& keyword = expect_keyword("'package', 'misc' or '}'");
      const bool is_package = keyword.text == "package";
      if (!is_package && keyword.text != "misc") {
        fail(keyword, "unknown keyword '" + keyword.text + "'");
      }
      const Token& value_token = peek();
      std::string value = expect_name(is_package ? "package name" : "file name");
      claim(is_package ? members : files, value, value_token,
            is_package ? "package reference" : "misc");
      expect(TokenKind::Semi, "';'");
      (is_package ? meta.packages : meta.misc).push_back(std::move(value));
    }
    take();
    return meta;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// --- serialization ---------------------------------------------------------

struct Decl {
  std::string header;
  bool block = false;
  std::vector<Decl> children;
};

void sort_decls(std::vector<Decl>& decls) {
  std::sort(decls.begin(), decls.end(),
            [](const Decl& a, const Decl& b) { return a.header < b.header; });
}

void emit(const Decl& decl, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (!decl.block) {
    out += pad + decl.header + ";\n";
    return;
  }
  if (decl.children.empty()) {
    out += pad + decl.header + " {}\n";
    return;
  }
  out += pad + decl.header + " {\n";
  for (const auto& child : decl.children) emit(child, indent + 1, out);
  out += pad + "}\n";
}

Decl leaf(std::string header) { return {std::move(header), false, {}}; }

std::vector<Decl> intrasystem_items(const Intrasystem& system, bool elide_mandated);

Decl component_decl(const CommunicatingComponent& component) {
  Decl decl;
  decl.block = true;
  if (component.kind == ComponentKind::Intrasystem) {
    decl.header = "intrasystem " + quote_string(component.name);
    if (component.nested) decl.children = intrasystem_items(*component.nested, false);
    return decl;
  }
  decl.header = std::string(to_string(component.kind)) + " " +
                quote_string(component.name);
  if (component.manager) decl.header += " manager " + quote_string(*component.manager);
  if (component.host) decl.header += " host " + quote_string(*component.host);
  for (const auto& port : component.ports) {
    decl.children.push_back(leaf(std::string(to_string(port.direction)) + " " +
                                 quote_string(port.channel) + " : " +
                                 quote_string(port.payload_type)));
  }
  sort_decls(decl.children);
  return decl;
}

std::vector<Decl> intrasystem_items(const Intrasystem& system, bool elide_mandated) {
  std::vector<Decl> items;
  for (const auto& component : system.components) {
    if (elide_mandated && role_of(component) != ComponentRole::None &&
        component.ports.empty()) {
      continue;
    }
    items.push_back(component_decl(component));
  }
  for (const auto& topic : system.declared_topics) {
    items.push_back(leaf("topic " + quote_string(topic.name) + " : " +
                         quote_string(topic.message)));
  }
  for (const auto& service : system.declared_services) {
    items.push_back(leaf("service " + quote_string(service.name) + " : " +
                         quote_string(service.data.request) + " -> " +
                         quote_string(service.data.response)));
  }
  for (const auto& action : system.declared_actions) {
    items.push_back(leaf("action " + quote_string(action.name) + " : " +
                         quote_string(action.data.goal) + " / " +
                         quote_string(action.data.feedback) + " / " +
                         quote_string(action.data.result)));
  }
  for (const auto& medium : system.mediums) {
    Decl decl{"medium " + quote_string(medium.name), true, {}};
    for (const auto& ref : medium.members) {
      decl.children.push_back(
          leaf(std::string(to_string(ref.kind)) + " " + quote_string(ref.channel)));
    }
    sort_decls(decl.children);
    items.push_back(std::move(decl));
  }
  sort_decls(items);
  return items;
}

Decl workspace_decl(const Workspace& workspace) {
  Decl decl{"workspace " + quote_string(workspace.name), true, {}};
  for (const auto& p : workspace.packages) {
    Decl pkg{"package " + quote_string(p.name), true, {}};
    const std::pair<const char*, const std::vector<std::string>*> lists[] = {
        {"node", &p.nodes},       {"nodelet", &p.nodelets},
        {"plugin", &p.plugins},   {"library", &p.libraries},
        {"msg", &p.msg_data},     {"srv", &p.srv_data},
        {"actiondef", &p.action_data}, {"misc", &p.misc}};
    for (const auto& [word, list] : lists) {
      for (const auto& value : *list) {
        pkg.children.push_back(leaf(std::string(word) + " " + quote_string(value)));
      }
    }
    sort_decls(pkg.children);
    decl.children.push_back(std::move(pkg));
  }
  for (const auto& m : workspace.metapackages) {
    Decl meta{"metapackage " + quote_string(m.name), true, {}};
    for (const auto& p : m.packages) meta.children.push_back(leaf("package " + quote_string(p)));
    for (const auto& f : m.misc) meta.children.push_back(leaf("misc " + quote_string(f)));
    sort_decls(meta.children);
    decl.children.push_back(std::move(meta));
  }
  sort_decls(decl.children);
  return decl;
}

}  // namespace

std::string quote_string(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    const auto u = static_cast<unsigned char>(c);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (u < 0x20 || u == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", u);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out += '"';
  return out;
}

ParseResult parse_model(std::string_view text) {
  try {
    Parser parser(Lexer(text).run());
    return parser.run();
  } catch (const SyntaxError& error) {
    return std::vector<ParseDiagnostic>{
        {error.span, error.message, Severity::Error}};
  }
}

std::string serialize_model(const RosSystem& model) {
  std::vector<Decl> top;
  for (const auto& system : model.running_systems) {
    Decl decl{"system " + quote_string(system.name) +
                  (system.compact ? " compact" : ""),
              true, intrasystem_items(system, !system.compact)};
    top.push_back(std::move(decl));
  }
  for (const auto& workspace : model.workspaces) {
    top.push_back(workspace_decl(workspace));
  }
  sort_decls(top);
  std::string out;
  for (const auto& decl : top) emit(decl, 0, out);
  return out;
}

}  // namespace meros
