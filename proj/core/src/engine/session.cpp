#include "advisor/engine/session.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "advisor/dsl/token.hpp"

namespace advisor::engine {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Exact identity key for duplicate detection: type tag plus source text.
std::string fact_key(const Fact& f) {
  std::string key = f.relation;
  key += f.is_template ? "\x1dT" : "\x1dO";
  for (const auto& v : f.values) {
    key += '\x1f';
    key += static_cast<char>('0' + v.index());
    key += to_source(v);
  }
  return key;
}

[[noreturn]] void type_mismatch(std::string_view fn, const Value& v) {
  throw EngineError(EngineErrc::TypeMismatch, std::string(fn) + " cannot take " +
                                                  std::string(type_name(v)) + " " + display(v));
}

bool truth(std::string_view fn, const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  type_mismatch(fn, v);
}

// <0, 0, >0 for numeric values; integers compare exactly, mixed pairs as double.
int compare_numbers(std::string_view fn, const Value& a, const Value& b) {
  if (!is_number(a)) type_mismatch(fn, a);
  if (!is_number(b)) type_mismatch(fn, b);
  const auto* ia = std::get_if<std::int64_t>(&a);
  const auto* ib = std::get_if<std::int64_t>(&b);
  if (ia && ib) return (*ia > *ib) - (*ia < *ib);
  const double da = as_double(a);
  const double db = as_double(b);
  return (da > db) - (da < db);
}

bool values_eq(std::string_view fn, const Value& a, const Value& b) {
  if (std::holds_alternative<Nil>(a)) type_mismatch(fn, a);
  if (std::holds_alternative<Nil>(b)) type_mismatch(fn, b);
  if (is_number(a) && is_number(b)) return compare_numbers(fn, a, b) == 0;
  return a == b;
}

Value arithmetic(std::string_view fn, const std::vector<Value>& args) {
  for (const auto& a : args) {
    if (!is_number(a)) type_mismatch(fn, a);
  }
  const bool all_int = std::all_of(args.begin(), args.end(), [](const Value& v) {
    return std::holds_alternative<std::int64_t>(v);
  });
  const char op = fn[0];
  if (op == '/') {
    double acc = args.size() == 1 ? 1.0 : as_double(args[0]);
    for (std::size_t i = args.size() == 1 ? 0 : 1; i < args.size(); ++i) {
      const double d = as_double(args[i]);
      if (d == 0.0) throw EngineError(EngineErrc::DivisionByZero, "division by zero");
      acc /= d;
    }
    return acc;
  }
  if (all_int) {
    std::int64_t acc = std::get<std::int64_t>(args[0]);
    bool overflow = false;
    if (args.size() == 1 && op == '-') overflow = __builtin_sub_overflow(std::int64_t{0}, acc, &acc);
    for (std::size_t i = 1; i < args.size(); ++i) {
      const auto x = std::get<std::int64_t>(args[i]);
      switch (op) {
        case '+': overflow |= __builtin_add_overflow(acc, x, &acc); break;
        case '-': overflow |= __builtin_sub_overflow(acc, x, &acc); break;
        default: overflow |= __builtin_mul_overflow(acc, x, &acc); break;
      }
    }
    if (overflow) throw EngineError(EngineErrc::IntegerOverflow, std::string(fn) + " overflowed");
    return acc;
  }
  double acc = as_double(args[0]);
  if (args.size() == 1 && op == '-') acc = -acc;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const double x = as_double(args[i]);
    switch (op) {
      case '+': acc += x; break;
      case '-': acc -= x; break;
      default: acc *= x; break;
    }
  }
  return acc;
}

// Next whitespace-delimited token; a leading quote reads a string up to the
// closing quote.
Value read_token(std::istream& in) {
  int c = in.peek();
  while (c != std::char_traits<char>::eof() && std::isspace(static_cast<unsigned char>(c))) {
    in.get();
    c = in.peek();
  }
  if (c == std::char_traits<char>::eof()) return Eof{};
  std::string text;
  if (c == '"') {
    in.get();
    while ((c = in.get()) != std::char_traits<char>::eof() && c != '"') {
      if (c == '\\') {
        const int next = in.get();
        if (next == std::char_traits<char>::eof()) break;
        c = next;
      }
      text += static_cast<char>(c);
    }
    return String{std::move(text)};
  }
  while ((c = in.peek()) != std::char_traits<char>::eof() &&
         !std::isspace(static_cast<unsigned char>(c))) {
    text += static_cast<char>(in.get());
  }
  auto v = dsl::classify_atom(text);
  if (!v) throw EngineError(EngineErrc::InvalidNumber, "number out of range: " + text);
  return *v;
}

struct Router {
  std::unique_ptr<std::istream> in;
  std::unique_ptr<std::ostream> out;
};

}  // namespace

FactInput FactInput::of_template(std::string relation,
                                 std::vector<std::pair<std::string, Value>> slots) {
  FactInput f;
  f.relation = std::move(relation);
  f.slots = std::move(slots);
  f.ordered = false;
  return f;
}

FactInput FactInput::ordered_fact(std::string relation, std::vector<Value> fields) {
  FactInput f;
  f.relation = std::move(relation);
  f.fields = std::move(fields);
  f.ordered = true;
  return f;
}

bool fires_before(const Activation& a, const Activation& b) {
  if (a.salience != b.salience) return a.salience > b.salience;
  return a.recency > b.recency;
}

class Session::Impl {
 public:
  Impl(std::shared_ptr<const RuleBase> rules, SessionIo io)
      : rules_(std::move(rules)), io_(std::move(io)) {
    if (!rules_) throw EngineError(EngineErrc::InvalidProgram, "no rule base");
  }

  ~Impl() {
    try {
      close_routers();
    } catch (...) {
    }
  }

  void reset() {
    close_routers();
    facts_.clear();
    keys_.clear();
    agenda_.clear();
    fired_.clear();
    log_.clear();
    next_fact_ = 0;
    next_recency_ = 0;
    insert(Fact{{}, std::string(dsl::kInitialFact), false, {}});
    for (const auto* d : rules_->deffacts()) {
      for (const auto& spec : d->facts) assert_fact(build_fact(spec, {}));
    }
  }

  AssertResult assert_fact(const FactInput& input) {
    Fact fact;
    fact.relation = input.relation;
    if (const TemplateInfo* t = rules_->find_template(input.relation)) {
      if (input.ordered && !input.fields.empty()) {
        throw EngineError(EngineErrc::FactShapeMismatch,
                          input.relation + " is a template; use slot values");
      }
      fact.is_template = true;
      fact.values.assign(t->slots.size(), Nil{});
      for (const auto& [slot, value] : input.slots) {
        const auto index = t->slot_index(slot);
        if (!index) {
          throw EngineError(EngineErrc::UnknownSlot, "template " + t->name + " has no slot " + slot);
        }
        fact.values[*index] = value;
      }
    } else {
      if (!input.ordered) {
        throw EngineError(EngineErrc::UnknownTemplate, "no deftemplate named " + input.relation);
      }
      fact.values = input.fields;
    }
    for (const auto& v : fact.values) {
      if (std::holds_alternative<Eof>(v)) {
        throw EngineError(EngineErrc::EofInFact, "end of input cannot be stored in fact " +
                                                     input.relation);
      }
    }
    return insert(std::move(fact));
  }

  void retract(FactId id) {
    const auto it = facts_.find(id);
    if (it == facts_.end()) {
      throw EngineError(EngineErrc::UnknownFact, "no live fact " + std::to_string(id.value));
    }
    keys_.erase(fact_key(it->second));
    facts_.erase(it);
    std::erase_if(agenda_, [&](const Activation& a) {
      return std::find(a.facts.begin(), a.facts.end(), id) != a.facts.end();
    });
  }

  std::size_t run(std::optional<std::size_t> max_fires) {
    std::size_t fired = 0;
    while (!agenda_.empty() && (!max_fires || fired < *max_fires)) {
      step();
      ++fired;
    }
    for (auto& [name, router] : routers_) {
      if (router.out) router.out->flush();
    }
    if (io_.standard_output) io_.standard_output->flush();
    if (agenda_.empty()) close_routers();
    return fired;
  }

  std::optional<FiredRule> step() {
    if (agenda_.empty()) return std::nullopt;
    auto best = std::max_element(agenda_.begin(), agenda_.end(),
                                 [](const Activation& a, const Activation& b) {
                                   return fires_before(b, a);
                                 });
    Activation act = std::move(*best);
    agenda_.erase(best);
    fired_.emplace(act.rule_index, ids(act.facts));
    FiredRule record{act.rule, act.facts, act.salience, act.recency};
    log_.push_back(record);
    const auto& rule = rules_->rules()[act.rule_index];
    try {
      execute(rule.def->rhs, act.bindings);
    } catch (const EngineError& e) {
      throw EngineError(e.code(), "in rule " + act.rule + ": " + e.detail());
    }
    return record;
  }

  Value eval(const dsl::Expression& expr, const Bindings& bindings) {
    return std::visit(
        Overloaded{
            [](const dsl::Constant& c) -> Value { return c.value; },
            [&](const dsl::VariableRef& v) -> Value {
              const auto it = bindings.find(v.name);
              if (it == bindings.end()) {
                throw EngineError(EngineErrc::UnboundVariable, "?" + v.name + " is not bound");
              }
              return it->second;
            },
            [&](const dsl::Call& call) -> Value { return eval_call(call, bindings); },
        },
        expr.node);
  }

  void printout(std::string_view router, std::span<const Value> items) {
    std::ostream* out = nullptr;
    if (router == "t") {
      out = io_.standard_output;
    } else {
      const auto it = routers_.find(router);
      if (it == routers_.end() || !it->second.out) {
        throw EngineError(EngineErrc::RouterNotOpen,
                          "router " + std::string(router) + " is not open for writing");
      }
      out = it->second.out.get();
    }
    if (!out) return;
    for (const auto& v : items) {
      const auto* sym = std::get_if<Symbol>(&v);
      if (sym && sym->name == "crlf") {
        *out << "\r\n";
      } else {
        *out << display(v);
      }
    }
  }

  void close_routers() {
    for (auto& [name, router] : routers_) {
      if (router.out) router.out->flush();
    }
    routers_.clear();
  }

  const std::map<FactId, Fact>& facts() const { return facts_; }

  std::vector<Activation> agenda() const {
    auto out = agenda_;
    std::sort(out.begin(), out.end(), fires_before);
    return out;
  }

  const std::vector<FiredRule>& log() const { return log_; }
  const RuleBase& rules() const { return *rules_; }

 private:
  static std::vector<std::int64_t> ids(const std::vector<FactId>& facts) {
    std::vector<std::int64_t> out;
    out.reserve(facts.size());
    for (auto f : facts) out.push_back(f.value);
    return out;
  }

  AssertResult insert(Fact fact) {
    auto key = fact_key(fact);
    if (keys_.count(key)) return {};
    fact.id = FactId{next_fact_++};
    const FactId id = fact.id;
    keys_.insert(std::move(key));
    const Fact& stored = facts_.emplace(id, std::move(fact)).first->second;
    activate(stored);
    return {id};
  }

  static bool shape_matches(const CompiledPattern& p, const Fact& f) {
    if (p.relation != f.relation || p.is_template != f.is_template) return false;
    return p.is_template || p.field_count == f.values.size();
  }

  // New activations are exactly the tuples that contain `fresh`. Each tuple is
  // produced once by fixing the first position that holds `fresh`.
  void activate(const Fact& fresh) {
    const auto& rules = rules_->rules();
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const auto& rule = rules[r];
      const auto n = rule.patterns.size();
      for (std::size_t first = 0; first < n; ++first) {
        if (!shape_matches(rule.patterns[first], fresh)) continue;
        std::vector<std::vector<const Fact*>> candidates(n);
        bool empty = false;
        for (std::size_t j = 0; j < n && !empty; ++j) {
          if (j == first) {
            candidates[j] = {&fresh};
            continue;
          }
          for (const auto& [id, f] : facts_) {
            if (j < first && id == fresh.id) continue;
            if (shape_matches(rule.patterns[j], f)) candidates[j].push_back(&f);
          }
          empty = candidates[j].empty();
        }
        if (empty) continue;
        std::vector<const Fact*> tuple(n);
        enumerate(r, candidates, tuple, 0);
      }
    }
  }

  void enumerate(std::size_t r, const std::vector<std::vector<const Fact*>>& candidates,
                 std::vector<const Fact*>& tuple, std::size_t depth) {
    if (depth == tuple.size()) {
      try_activate(r, tuple);
      return;
    }
    for (const Fact* f : candidates[depth]) {
      tuple[depth] = f;
      enumerate(r, candidates, tuple, depth + 1);
    }
  }

  void try_activate(std::size_t r, const std::vector<const Fact*>& tuple) {
    const auto& rule = rules_->rules()[r];
    std::vector<FactId> fact_ids;
    fact_ids.reserve(tuple.size());
    for (const Fact* f : tuple) fact_ids.push_back(f->id);
    if (fired_.count({r, ids(fact_ids)})) return;
    auto bindings = match(rule, tuple);
    if (!bindings) return;
    Activation a;
    a.rule_index = r;
    a.rule = rule.def->name;
    a.bindings = std::move(*bindings);
    a.facts = std::move(fact_ids);
    a.salience = rule.def->salience;
    a.recency = next_recency_++;
    agenda_.push_back(std::move(a));
  }

  std::optional<Bindings> match(const CompiledRule& rule, const std::vector<const Fact*>& tuple) {
    Bindings b;
    for (const auto& step : rule.steps) {
      if (const auto* index = std::get_if<std::size_t>(&step)) {
        const auto& pattern = rule.patterns[*index];
        const Fact& fact = *tuple[*index];
        for (const auto& [pos, term] : pattern.constraints) {
          const Value& v = fact.values[pos];
          if (const auto* c = std::get_if<dsl::Constant>(&term)) {
            if (!(c->value == v)) return std::nullopt;
            continue;
          }
          const auto& name = std::get<dsl::VariableRef>(term).name;
          const auto it = b.find(name);
          if (it == b.end()) {
            b.emplace(name, v);
          } else if (!(it->second == v)) {
            return std::nullopt;
          }
        }
        if (pattern.fact_binding) b[*pattern.fact_binding] = FactAddress{fact.id.value};
      } else {
        const auto* expr = std::get<const dsl::Expression*>(step);
        try {
          if (!truth("test", eval(*expr, b))) return std::nullopt;
        } catch (const EngineError& e) {
          throw EngineError(e.code(), "in test of rule " + rule.def->name + ": " + e.detail());
        }
      }
    }
    return b;
  }

  FactInput build_fact(const dsl::FactSpec& spec, const Bindings& bindings) {
    if (rules_->find_template(spec.relation) || !spec.slots.empty()) {
      std::vector<std::pair<std::string, Value>> slots;
      for (const auto& s : spec.slots) slots.emplace_back(s.slot, eval(s.value, bindings));
      return FactInput::of_template(spec.relation, std::move(slots));
    }
    std::vector<Value> fields;
    for (const auto& e : spec.fields) fields.push_back(eval(e, bindings));
    return FactInput::ordered_fact(spec.relation, std::move(fields));
  }

  void execute(const std::vector<dsl::Action>& actions, Bindings& bindings) {
    for (const auto& action : actions) {
      std::visit(Overloaded{
                     [&](const dsl::AssertAction& a) { assert_fact(build_fact(a.fact, bindings)); },
                     [&](const dsl::RetractAction& a) {
                       const Value v = eval(dsl::Expression{dsl::VariableRef{a.variable}, {}}, bindings);
                       const auto* addr = std::get_if<FactAddress>(&v);
                       if (!addr) type_mismatch("retract", v);
                       retract(FactId{addr->id});
                     },
                     [&](const dsl::PrintoutAction& a) {
                       std::vector<Value> items;
                       items.reserve(a.items.size());
                       for (const auto& e : a.items) items.push_back(eval(e, bindings));
                       printout(a.router, items);
                     },
                     [&](const dsl::BindAction& a) { bindings[a.variable] = eval(a.value, bindings); },
                     [&](const dsl::OpenAction& a) { open(a, bindings); },
                     [&](const dsl::IfAction& a) {
                       if (truth("if", eval(a.condition, bindings))) {
                         execute(a.then_branch, bindings);
                       } else {
                         execute(a.else_branch, bindings);
                       }
                     },
                 },
                 action.node);
    }
  }

  void open(const dsl::OpenAction& a, const Bindings& bindings) {
    const Value path = eval(a.path, bindings);
    std::string name;
    if (const auto* s = std::get_if<String>(&path)) {
      name = s->text;
    } else if (const auto* y = std::get_if<Symbol>(&path)) {
      name = y->name;
    } else {
      type_mismatch("open", path);
    }
    if (routers_.count(a.router)) {
      throw EngineError(EngineErrc::RouterAlreadyOpen, "router " + a.router + " is already open");
    }
    if (!io_.files) throw EngineError(EngineErrc::OpenFailed, "no file store for " + name);
    Router router;
    if (a.mode == "r") {
      router.in = io_.files->open_read(name);
      if (!router.in) throw EngineError(EngineErrc::OpenFailed, "cannot open " + name + " for reading");
    } else {
      router.out = io_.files->open_write(name, a.mode == "a");
      if (!router.out) throw EngineError(EngineErrc::OpenFailed, "cannot open " + name + " for writing");
    }
    routers_.emplace(a.router, std::move(router));
  }

  Value eval_call(const dsl::Call& call, const Bindings& bindings) {
    const auto& fn = call.function;
    const auto& args = call.args;
    if (fn == "and" || fn == "or") {
      const bool is_and = fn == "and";
      for (const auto& a : args) {
        if (truth(fn, eval(a, bindings)) != is_and) return !is_and;
      }
      return is_and;
    }
    if (fn == "not") {
      if (args.size() != 1) throw EngineError(EngineErrc::TypeMismatch, "not takes 1 argument");
      return !truth(fn, eval(args[0], bindings));
    }
    if (fn == "read") return read(args, bindings);
    std::vector<Value> values;
    values.reserve(args.size());
    for (const auto& a : args) values.push_back(eval(a, bindings));
    if (fn == "eq" || fn == "neq" || fn == ">=" || fn == ">" || fn == "<=" || fn == "<") {
      if (values.size() != 2) throw EngineError(EngineErrc::TypeMismatch, fn + " takes 2 arguments");
      if (fn == "eq") return values_eq(fn, values[0], values[1]);
      if (fn == "neq") return !values_eq(fn, values[0], values[1]);
      const int c = compare_numbers(fn, values[0], values[1]);
      if (fn == ">=") return c >= 0;
      if (fn == ">") return c > 0;
      if (fn == "<=") return c <= 0;
      return c < 0;
    }
    if (fn == "+" || fn == "-" || fn == "*" || fn == "/") {
      if (values.empty()) throw EngineError(EngineErrc::TypeMismatch, fn + " needs an argument");
      return arithmetic(fn, values);
    }
    throw EngineError(EngineErrc::InvalidProgram, "unknown function " + fn);
  }

  Value read(const std::vector<dsl::Expression>& args, const Bindings& bindings) {
    std::string router = "t";
    if (!args.empty()) {
      const Value v = eval(args[0], bindings);
      const auto* sym = std::get_if<Symbol>(&v);
      if (!sym) type_mismatch("read", v);
      router = sym->name;
    }
    if (router == "t") {
      if (!io_.standard_input) return Eof{};
      return read_token(*io_.standard_input);
    }
    const auto it = routers_.find(router);
    if (it == routers_.end() || !it->second.in) {
      throw EngineError(EngineErrc::RouterNotOpen, "router " + router + " is not open for reading");
    }
    return read_token(*it->second.in);
  }

  std::shared_ptr<const RuleBase> rules_;
  SessionIo io_;
  std::map<FactId, Fact> facts_;
  std::set<std::string> keys_;
  std::vector<Activation> agenda_;
  std::set<std::pair<std::size_t, std::vector<std::int64_t>>> fired_;
  std::vector<FiredRule> log_;
  std::map<std::string, Router, std::less<>> routers_;
  std::int64_t next_fact_ = 0;
  std::uint64_t next_recency_ = 0;
};

Session::Session(std::shared_ptr<const RuleBase> rules, SessionIo io)
    : impl_(std::make_unique<Impl>(std::move(rules), std::move(io))) {
  impl_->reset();
}

Session::~Session() = default;
Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;

void Session::reset() { impl_->reset(); }
AssertResult Session::assert_fact(const FactInput& fact) { return impl_->assert_fact(fact); }
void Session::retract_fact(FactId id) { impl_->retract(id); }
std::size_t Session::run(std::optional<std::size_t> max_fires) { return impl_->run(max_fires); }
std::optional<FiredRule> Session::step() { return impl_->step(); }
Value Session::eval(const dsl::Expression& expr, const Bindings& bindings) {
  return impl_->eval(expr, bindings);
}
void Session::printout(std::string_view router, std::span<const Value> items) {
  impl_->printout(router, items);
}
void Session::close_routers() { impl_->close_routers(); }
const std::map<FactId, Fact>& Session::facts() const noexcept { return impl_->facts(); }
const Fact* Session::find_fact(FactId id) const {
  const auto it = impl_->facts().find(id);
  return it == impl_->facts().end() ? nullptr : &it->second;
}
std::vector<Activation> Session::agenda() const { return impl_->agenda(); }
const std::vector<FiredRule>& Session::fire_log() const noexcept { return impl_->log(); }
const RuleBase& Session::rules() const noexcept { return impl_->rules(); }

}  // namespace advisor::engine
