#include "mcc/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace mcc {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Cursor over contract / repository text. Tokens are whitespace separated
/// words, integers and the punctuation `. ( ) =`.
class Cursor {
 public:
  explicit Cursor(std::string_view src) : src_(src) {}

  void skip_ws() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SourcePos pos() {
    skip_ws();
    return {line_, col_};
  }

  bool at_end() {
    skip_ws();
    return i_ >= src_.size();
  }

  std::string_view peek_word() {
    skip_ws();
    std::size_t j = i_;
    if (j >= src_.size() || !is_ident_start(src_[j])) return {};
    while (j < src_.size() && is_ident_char(src_[j])) ++j;
    return src_.substr(i_, j - i_);
  }

  bool peek_char(char c) {
    skip_ws();
    return i_ < src_.size() && src_[i_] == c;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos(), msg); }

  std::string describe_next() {
    skip_ws();
    if (i_ >= src_.size()) return "end of input";
    auto w = peek_word();
    if (!w.empty()) return "'" + std::string(w) + "'";
    return std::string("'") + src_[i_] + "'";
  }

  std::string ident(const char* what) {
    auto w = peek_word();
    if (w.empty()) fail(std::string("expected ") + what + ", found " + describe_next());
    for (std::size_t k = 0; k < w.size(); ++k) advance();
    return std::string(w);
  }

  void keyword(std::string_view kw) {
    if (peek_word() != kw) fail("expected '" + std::string(kw) + "', found " + describe_next());
    for (std::size_t k = 0; k < kw.size(); ++k) advance();
  }

  void punct(char c) {
    if (!peek_char(c)) fail(std::string("expected '") + c + "', found " + describe_next());
    advance();
  }

  Time integer(const char* what) {
    skip_ws();
    std::size_t j = i_;
    while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
    if (j == i_) fail(std::string("expected integer ") + what + ", found " + describe_next());
    if (j < src_.size() && is_ident_char(src_[j])) fail(std::string("malformed integer ") + what);
    if (j - i_ > 15) fail(std::string("integer out of range for ") + what);
    Time v = std::stoll(std::string(src_.substr(i_, j - i_)));
    while (i_ < j) advance();
    return v;
  }

  /// `key=INT`
  Time assignment(std::string_view key) {
    keyword(key);
    punct('=');
    return integer(std::string(key).c_str());
  }

  /// Raw text up to the matching ')', which is consumed. The opening '(' must already be consumed.
  std::string raw_args() {
    std::size_t start = i_;
    int depth = 1;
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) break;
      if (c == '\n') fail("unterminated argument list");
      advance();
    }
    if (i_ >= src_.size()) fail("unterminated argument list");
    std::string args = trim(src_.substr(start, i_ - start));
    advance();
    return args;
  }

  MethodRef method_ref() {
    MethodRef m;
    m.pos = pos();
    m.service = ident("service name");
    punct('.');
    m.method = ident("method name");
    punct('(');
    m.args = raw_args();
    return m;
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

Thread parse_thread(Cursor& in) {
  Thread t;
  t.pos = in.pos();
  in.keyword("thread");
  t.name = in.ident("thread name");
  in.keyword("on");
  auto kind = in.peek_word();
  if (kind == "RPC") {
    in.keyword("RPC");
    t.activation = RpcEntry{in.method_ref()};
  } else if (kind == "initialization") {
    in.keyword("initialization");
    t.activation = Initialization{};
  } else if (kind == "time") {
    SourcePos p = in.pos();
    in.keyword("time");
    in.punct('(');
    TimeActivation a;
    a.period = in.assignment("period");
    a.jitter = in.assignment("jitter");
    in.punct(')');
    if (a.period <= 0) throw ParseError(p, "period must be positive");
    if (a.jitter >= a.period) throw ParseError(p, "jitter must be smaller than the period");
    t.activation = a;
  } else {
    in.fail("expected activation (RPC, initialization or time), found " + in.describe_next());
  }

  for (;;) {
    auto w = in.peek_word();
    if (w == "task") {
      TaskStep s;
      s.pos = in.pos();
      in.keyword("task");
      s.name = in.ident("task name");
      in.keyword("onto");
      s.resource_type = in.ident("resource type");
      s.wcet = in.assignment("wcet");
      s.bcet = in.assignment("bcet");
      if (s.bcet == 0) throw ParseError(s.pos, "task " + s.name + ": bcet must be positive");
      if (s.bcet > s.wcet) throw ParseError(s.pos, "task " + s.name + ": bcet > wcet");
      t.steps.emplace_back(std::move(s));
    } else if (w == "RPC" || w == "SIGNAL") {
      CallStep c;
      c.kind = w == "RPC" ? CallKind::Rpc : CallKind::Signal;
      in.keyword(w);
      c.target = in.method_ref();
      t.steps.emplace_back(std::move(c));
    } else {
      break;
    }
  }
  return t;
}

void validate(const Contract& c, SourcePos component_pos) {
  auto check_set = [&](const std::vector<std::string>& v, const char* what) {
    std::set<std::string> seen;
    for (const auto& s : v)
      if (!seen.insert(s).second) throw ParseError(component_pos, std::string("duplicate ") + what + " service " + s);
  };
  check_set(c.required, "required");
  check_set(c.provided, "provided");
  for (const auto& s : c.required)
    if (c.provides_service(s)) throw ParseError(component_pos, "service " + s + " is both required and provided");

  std::set<std::string> threads;
  std::set<std::string> tasks;
  for (const auto& t : c.threads) {
    if (!threads.insert(t.name).second) throw ParseError(t.pos, "duplicate thread name " + t.name);
    if (const auto* e = std::get_if<RpcEntry>(&t.activation)) {
      if (!c.provides_service(e->method.service))
        throw ParseError(e->method.pos, "entry point " + e->method.str() + " is not on a provided service");
      for (const auto& other : c.threads) {
        if (&other == &t) break;
        if (const auto* oe = std::get_if<RpcEntry>(&other.activation); oe && oe->method.same_method(e->method))
          throw ParseError(e->method.pos, "two threads share entry point " + e->method.str());
      }
    }
    for (const auto& s : t.steps) {
      if (const auto* task = std::get_if<TaskStep>(&s)) {
        if (!tasks.insert(task->name).second) throw ParseError(task->pos, "duplicate task name " + task->name);
      } else {
        const auto& call = std::get<CallStep>(s);
        if (!c.requires_service(call.target.service))
          throw ParseError(call.target.pos, "undeclared service reference " + call.target.service);
      }
    }
  }

  for (const auto& r : c.timings) {
    if (r.bound <= 0) throw ParseError(r.pos, "timing bound must be positive");
    if (const auto* th = std::get_if<std::string>(&r.target)) {
      if (!c.find_thread(*th)) throw ParseError(r.pos, "timing target " + *th + " is not a thread of " + c.component);
    } else {
      const auto& m = std::get<MethodRef>(r.target);
      bool resolved = false;
      if (c.provides_service(m.service)) resolved = c.entry_thread(m) != nullptr;
      for (const auto& t : c.threads)
        for (const auto& s : t.steps)
          if (const auto* call = std::get_if<CallStep>(&s); call && call->target.same_method(m)) resolved = true;
      if (!resolved) throw ParseError(m.pos, "timing target " + m.str() + " is neither called nor served by " + c.component);
    }
  }
  for (const auto& r : c.control_flow) {
    for (const auto* m : {&r.forbidden, &r.prerequisite})
      if (!c.requires_service(m->service) && !c.provides_service(m->service))
        throw ParseError(m->pos, "undeclared service reference " + m->service);
  }
}

std::string activation_str(const Activation& a) {
  if (const auto* e = std::get_if<RpcEntry>(&a)) return "RPC " + e->method.str();
  if (std::holds_alternative<Initialization>(a)) return "initialization";
  const auto& t = std::get<TimeActivation>(a);
  return "time (period=" + std::to_string(t.period) + " jitter=" + std::to_string(t.jitter) + ")";
}

}  // namespace

std::string TimingReq::target_str() const {
  if (const auto* th = std::get_if<std::string>(&target)) return *th;
  return std::get<MethodRef>(target).str();
}

bool Contract::requires_service(std::string_view s) const { return contains(required, s); }
bool Contract::provides_service(std::string_view s) const { return contains(provided, s); }

const Thread* Contract::find_thread(std::string_view name) const {
  for (const auto& t : threads)
    if (t.name == name) return &t;
  return nullptr;
}

const Thread* Contract::entry_thread(const MethodRef& m) const {
  for (const auto& t : threads)
    if (const auto* e = std::get_if<RpcEntry>(&t.activation); e && e->method.same_method(m)) return &t;
  return nullptr;
}

const InterfaceMethod* ServiceInterface::find_method(std::string_view n) const {
  for (const auto& m : methods)
    if (m.name == n) return &m;
  return nullptr;
}

const Contract& SoftwareModel::contract(std::string_view name) const {
  auto it = contracts.find(std::string(name));
  if (it == contracts.end()) throw ModelError("unknown component " + std::string(name));
  return it->second;
}

Contract parse_contract(std::string_view text) {
  Cursor in(text);
  Contract c;
  SourcePos cpos = in.pos();
  in.keyword("component");
  c.component = in.ident("component name");

  if (in.peek_word() == "services") {
    in.keyword("services");
    for (;;) {
      auto w = in.peek_word();
      if (w == "requires") {
        in.keyword("requires");
        c.required.push_back(in.ident("service name"));
      } else if (w == "provides") {
        in.keyword("provides");
        c.provided.push_back(in.ident("service name"));
      } else {
        break;
      }
    }
  }
  if (in.peek_word() == "threads") {
    in.keyword("threads");
    while (in.peek_word() == "thread") c.threads.push_back(parse_thread(in));
  }
  if (in.peek_word() == "timings") {
    in.keyword("timings");
    while (in.peek_word() == "timing") {
      TimingReq r;
      r.pos = in.pos();
      in.keyword("timing");
      r.bound = in.integer("timing bound");
      // A target followed by '.' is a method reference, otherwise a thread name.
      Cursor probe = in;
      probe.ident("timing target");
      if (probe.peek_char('.')) {
        r.target = in.method_ref();
      } else {
        r.target = in.ident("timing target");
      }
      c.timings.push_back(std::move(r));
    }
  }
  if (in.peek_word() == "control_flow") {
    in.keyword("control_flow");
    while (in.peek_word() == "not") {
      NotUntilReq r;
      r.pos = in.pos();
      in.keyword("not");
      r.forbidden = in.method_ref();
      in.keyword("until");
      r.prerequisite = in.method_ref();
      c.control_flow.push_back(std::move(r));
    }
  }
  if (!in.at_end()) in.fail("unexpected " + in.describe_next());
  validate(c, cpos);
  return c;
}

std::string render_contract(const Contract& c) {
  std::ostringstream out;
  out << "component " << c.component << "\n";
  if (!c.required.empty() || !c.provided.empty()) {
    out << "  services\n";
    for (const auto& s : c.required) out << "    requires " << s << "\n";
    for (const auto& s : c.provided) out << "    provides " << s << "\n";
  }
  if (!c.threads.empty()) {
    out << "  threads\n";
    for (const auto& t : c.threads) {
      out << "    thread " << t.name << "\n";
      out << "      on " << activation_str(t.activation) << "\n";
      for (const auto& s : t.steps) {
        if (const auto* task = std::get_if<TaskStep>(&s)) {
          out << "        task " << task->name << "\n"
              << "          onto " << task->resource_type << "\n"
              << "            wcet=" << task->wcet << " bcet=" << task->bcet << "\n";
        } else {
          const auto& call = std::get<CallStep>(s);
          out << "        " << (call.kind == CallKind::Rpc ? "RPC " : "SIGNAL ") << call.target.str() << "\n";
        }
      }
    }
  }
  if (!c.timings.empty()) {
    out << "  timings\n";
    for (const auto& r : c.timings) out << "    timing " << r.bound << "\n      " << r.target_str() << "\n";
  }
  if (!c.control_flow.empty()) {
    out << "  control_flow\n";
    for (const auto& r : c.control_flow)
      out << "    not " << r.forbidden.str() << "\n      until " << r.prerequisite.str() << "\n";
  }
  return out.str();
}

std::string dump_ast(const Contract& c) {
  std::ostringstream out;
  out << "contract " << c.component << "\n";
  for (const auto& s : c.required) out << "  requires " << s << "\n";
  for (const auto& s : c.provided) out << "  provides " << s << "\n";
  for (const auto& t : c.threads) {
    out << "  thread " << t.name << " activation=";
    if (const auto* e = std::get_if<RpcEntry>(&t.activation)) {
      out << "rpc " << e->method.str();
    } else if (std::holds_alternative<Initialization>(t.activation)) {
      out << "initialization";
    } else {
      const auto& a = std::get<TimeActivation>(t.activation);
      out << "time period=" << a.period << " jitter=" << a.jitter;
    }
    out << "\n";
    for (const auto& s : t.steps) {
      if (const auto* task = std::get_if<TaskStep>(&s)) {
        out << "    task " << task->name << " type=" << task->resource_type << " wcet=" << task->wcet
            << " bcet=" << task->bcet << "\n";
      } else {
        const auto& call = std::get<CallStep>(s);
        out << "    " << (call.kind == CallKind::Rpc ? "rpc " : "signal ") << call.target.str() << "\n";
      }
    }
  }
  for (const auto& r : c.timings) {
    out << "  timing " << r.bound << (std::holds_alternative<std::string>(r.target) ? " thread=" : " method=")
        << r.target_str() << "\n";
  }
  for (const auto& r : c.control_flow)
    out << "  not " << r.forbidden.str() << " until " << r.prerequisite.str() << "\n";
  return out.str();
}

ServiceRepository parse_repository(std::string_view text) {
  Cursor in(text);
  ServiceRepository repo;
  while (!in.at_end()) {
    SourcePos p = in.pos();
    in.keyword("service");
    ServiceInterface s;
    s.name = in.ident("service name");
    if (in.peek_word() == "max_clients") {
      in.keyword("max_clients");
      SourcePos mp = in.pos();
      Time n = in.integer("max_clients");
      if (n < 1) throw ParseError(mp, "max_clients must be at least 1");
      s.max_clients = static_cast<int>(n);
    }
    while (in.peek_word() == "method") {
      in.keyword("method");
      SourcePos mp = in.pos();
      InterfaceMethod m;
      m.name = in.ident("method name");
      in.punct('(');
      m.args = in.raw_args();
      if (s.find_method(m.name)) throw ParseError(mp, "duplicate method " + m.name + " in service " + s.name);
      s.methods.push_back(std::move(m));
    }
    if (repo.count(s.name)) throw ParseError(p, "duplicate service " + s.name);
    repo.emplace(s.name, std::move(s));
  }
  return repo;
}

std::string render_repository(const ServiceRepository& repo) {
  std::ostringstream out;
  for (const auto& [name, s] : repo) {
    out << "service " << name;
    if (s.max_clients) out << " max_clients " << *s.max_clients;
    out << "\n";
    for (const auto& m : s.methods) out << "  method " << m.name << "(" << m.args << ")\n";
  }
  return out.str();
}

void check_against_repository(const Contract& c, const ServiceRepository& repo) {
  auto service = [&](const std::string& name) -> const ServiceInterface& {
    auto it = repo.find(name);
    if (it == repo.end()) throw ModelError(c.component + ": unknown service " + name);
    return it->second;
  };
  auto method = [&](const MethodRef& m) {
    const auto& s = service(m.service);
    const auto* im = s.find_method(m.method);
    if (!im) throw ModelError(c.component + ": method " + m.str() + " is not part of interface " + s.name);
    if (im->args != m.args)
      throw ModelError(c.component + ": " + m.str() + " does not match interface signature " + m.method + "(" +
                       im->args + ")");
  };
  for (const auto& s : c.required) service(s);
  for (const auto& s : c.provided) service(s);
  for (const auto& t : c.threads) {
    if (const auto* e = std::get_if<RpcEntry>(&t.activation)) method(e->method);
    for (const auto& s : t.steps)
      if (const auto* call = std::get_if<CallStep>(&s)) method(call->target);
  }
  for (const auto& r : c.timings)
    if (const auto* m = std::get_if<MethodRef>(&r.target)) method(*m);
  for (const auto& r : c.control_flow) {
    method(r.forbidden);
    method(r.prerequisite);
  }
}

SoftwareModel load_software_model(const std::vector<std::string>& contract_texts, std::string_view repository_text) {
  SoftwareModel model;
  model.services = parse_repository(repository_text);
  for (const auto& text : contract_texts) {
    Contract c = parse_contract(text);
    check_against_repository(c, model.services);
    std::string name = c.component;
    if (!model.contracts.emplace(name, std::move(c)).second) throw ModelError("duplicate component " + name);
  }
  return model;
}

}  // namespace mcc
