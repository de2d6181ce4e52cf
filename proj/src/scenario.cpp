#include "ncbayes/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "ncbayes/bayes.hpp"
#include "ncbayes/errors.hpp"
#include "ncbayes/gaussian.hpp"
#include "ncbayes/matrices.hpp"
#include "ncbayes/spacetime.hpp"

namespace ncbayes {

using Eigen::Index;

const std::vector<std::string>& task_kinds() {
  static const std::vector<std::string> kinds = {
      "generate_algebra", "classical_posterior", "bayes_update", "takesaki", "kms",
      "wedge_classify",   "killing_audit",       "ds_tangency",  "tfd_demo", "chain_run"};
  return kinds;
}

// ---------------------------------------------------------------------------
// Matrix expressions

namespace {

struct Value {
  bool scalar = true;
  double number = 0.0;
  CMatrix matrix;
};

class ExprParser {
 public:
  ExprParser(std::string_view text, std::string field) : text_(text), field_(std::move(field)) {}

  Value parse() {
    Value v = sum();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(field_, what + " in expression \"" + std::string(text_) + "\"");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Value combine(const Value& a, const Value& b, char op) {
    Value out;
    if (op == '*') {
      if (a.scalar && b.scalar) return Value{true, a.number * b.number, {}};
      out.scalar = false;
      if (a.scalar) out.matrix = a.number * b.matrix;
      else if (b.scalar) out.matrix = b.number * a.matrix;
      else {
        if (a.matrix.cols() != b.matrix.rows()) fail("matrix product size mismatch");
        out.matrix = a.matrix * b.matrix;
      }
      return out;
    }
    const double sign = op == '+' ? 1.0 : -1.0;
    if (a.scalar && b.scalar) return Value{true, a.number + sign * b.number, {}};
    if (a.scalar || b.scalar) fail("cannot add a scalar and a matrix");
    if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols()) fail("matrix sum size mismatch");
    out.scalar = false;
    out.matrix = a.matrix + sign * b.matrix;
    return out;
  }

  Value sum() {
    Value v = product();
    for (;;) {
      if (accept('+')) v = combine(v, product(), '+');
      else if (accept('-')) v = combine(v, product(), '-');
      else return v;
    }
  }

  Value product() {
    Value v = factor();
    for (;;) {
      if (accept('*')) {
        v = combine(v, factor(), '*');
      } else if (accept('/')) {
        const Value d = factor();
        if (!d.scalar) fail("can only divide by a scalar");
        if (d.number == 0.0) fail("division by zero");
        v = combine(v, Value{true, 1.0 / d.number, {}}, '*');
      } else {
        return v;
      }
    }
  }

  Value factor() {
    skip();
    if (accept('-')) return combine(Value{true, -1.0, {}}, factor(), '*');
    if (accept('(')) {
      Value v = sum();
      expect(')');
      return v;
    }
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return call();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Value number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    const auto used = static_cast<std::size_t>(end - rest.c_str());
    if (used == 0) fail("bad number");
    pos_ += used;
    return Value{true, v, {}};
  }

  int integer(const Value& v, const char* what) {
    if (!v.scalar || v.number != std::floor(v.number) || v.number < 0) fail(std::string(what) + " must be a nonnegative integer");
    return static_cast<int>(v.number);
  }

  const CMatrix& mat(const Value& v, const char* what) {
    if (v.scalar) fail(std::string(what) + " expects a matrix argument");
    return v.matrix;
  }

  Value call() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string id(text_.substr(start, pos_ - start));
    std::vector<Value> args;
    if (accept('(')) {
      if (!accept(')')) {
        do args.push_back(sum());
        while (accept(','));
        expect(')');
      }
    }
    auto arity = [&](std::size_t n) {
      if (args.size() != n) fail(id + " takes " + std::to_string(n) + " argument(s)");
    };
    auto matrix_value = [](CMatrix m) { return Value{false, 0.0, std::move(m)}; };

    if (id == "pi") return arity(0), Value{true, std::numbers::pi, {}};
    if (id == "pauli_x") return arity(0), matrix_value(pauli_x());
    if (id == "pauli_y") return arity(0), matrix_value(pauli_y());
    if (id == "pauli_z") return arity(0), matrix_value(pauli_z());
    if (id == "identity" || id == "zero" || id == "tracial") {
      arity(1);
      const int n = integer(args[0], "dimension");
      if (n < 1) fail("dimension must be positive");
      if (id == "zero") return matrix_value(CMatrix::Zero(n, n));
      CMatrix eye = CMatrix::Identity(n, n);
      return matrix_value(id == "tracial" ? CMatrix(eye / double(n)) : eye);
    }
    if (id == "unit") {
      arity(3);
      const int i = integer(args[0], "row"), j = integer(args[1], "column"), n = integer(args[2], "dimension");
      if (i >= n || j >= n) fail("unit index out of range");
      return matrix_value(matrix_unit(i, j, n));
    }
    if (id == "diag") {
      if (args.empty()) fail("diag needs at least one entry");
      CVector d(static_cast<Index>(args.size()));
      for (std::size_t k = 0; k < args.size(); ++k) {
        if (!args[k].scalar) fail("diag entries must be numbers");
        d(static_cast<Index>(k)) = args[k].number;
      }
      return matrix_value(d.asDiagonal());
    }
    if (id == "kron") {
      if (args.size() < 2) fail("kron takes at least two arguments");
      CMatrix out = mat(args[0], "kron");
      for (std::size_t k = 1; k < args.size(); ++k) out = kron(out, mat(args[k], "kron"));
      return matrix_value(out);
    }
    if (id == "gibbs") {
      arity(2);
      const CMatrix& h = mat(args[0], "gibbs");
      if (!args[1].scalar) fail("gibbs expects a numeric beta");
      if (h.rows() != h.cols() || hermiticity_residual(h) > 1e-12) fail("gibbs expects a Hermitian matrix");
      return matrix_value(gibbs_density(h, args[1].number));
    }
    fail("unknown name '" + id + "'");
  }

  std::string_view text_;
  std::string field_;
  std::size_t pos_ = 0;
};

RMatrix real_rows(const Json& rows, const std::string& field) {
  if (!rows.is_array() || rows.empty()) throw ParseError(field, "expected a nonempty array of rows");
  const auto r = rows.size();
  std::size_t c = 0;
  RMatrix out;
  for (std::size_t i = 0; i < r; ++i) {
    const Json& row = rows[i];
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.empty()) throw ParseError(rf, "expected a nonempty array of numbers");
    if (i == 0) {
      c = row.size();
      out.resize(static_cast<Index>(r), static_cast<Index>(c));
    }
    if (row.size() != c) throw ParseError(rf, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) {
      if (!row[j].is_number()) throw ParseError(rf + "[" + std::to_string(j) + "]", "expected a number");
      out(static_cast<Index>(i), static_cast<Index>(j)) = row[j].get<double>();
    }
  }
  return out;
}

double parse_scalar(const Json& value, const std::string& field) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    Value v = ExprParser(value.get<std::string>(), field).parse();
    if (!v.scalar) throw ParseError(field, "expected a number");
    return v.number;
  }
  throw ParseError(field, "expected a number or numeric expression");
}

}  // namespace

CMatrix parse_matrix(const Json& value, const std::string& field) {
  if (value.is_string()) {
    Value v = ExprParser(value.get<std::string>(), field).parse();
    if (v.scalar) throw ParseError(field, "expression evaluates to a number, not a matrix");
    return v.matrix;
  }
  if (value.is_array()) return real_rows(value, field).cast<Complex>();
  if (value.is_object()) {
    if (!value.contains("re")) throw ParseError(field + ".re", "missing real part");
    const RMatrix re = real_rows(value["re"], field + ".re");
    CMatrix out = re.cast<Complex>();
    if (value.contains("im")) {
      const RMatrix im = real_rows(value["im"], field + ".im");
      if (im.rows() != re.rows() || im.cols() != re.cols()) throw ParseError(field + ".im", "shape differs from re");
      out += Complex(0, 1) * im.cast<Complex>();
    }
    for (auto it = value.begin(); it != value.end(); ++it)
      if (it.key() != "re" && it.key() != "im") throw ParseError(field + "." + it.key(), "unexpected key");
    return out;
  }
  throw ParseError(field, "expected a matrix");
}

// ---------------------------------------------------------------------------
// Parsing and validation

namespace {

struct FieldCheck {
  const Json& params;
  std::string path;

  bool has(const char* key) const { return params.contains(key); }
  std::string at(const char* key) const { return path + "." + key; }

  const Json& required(const char* key) const {
    if (!has(key)) throw ParseError(at(key), "missing required field");
    return params[key];
  }
  std::string string(const char* key) const {
    const Json& v = required(key);
    if (!v.is_string()) throw ParseError(at(key), "expected a string");
    return v.get<std::string>();
  }
  long integer(const char* key, long lo, long hi) const {
    const Json& v = required(key);
    if (!v.is_number_integer()) throw ParseError(at(key), "expected an integer");
    const long x = v.get<long>();
    if (x < lo || x > hi)
      throw ParseError(at(key), "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }
  double number(const char* key) const { return parse_scalar(required(key), at(key)); }
  bool boolean(const char* key) const {
    const Json& v = required(key);
    if (!v.is_boolean()) throw ParseError(at(key), "expected true or false");
    return v.get<bool>();
  }
  CMatrix matrix(const char* key) const { return parse_matrix(required(key), at(key)); }
  void only(std::initializer_list<const char*> allowed) const {
    for (auto it = params.begin(); it != params.end(); ++it) {
      const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; });
      if (!ok) throw ParseError(path + "." + it.key(), "unexpected field");
    }
  }
};

void check_reference(const FieldCheck& f, const char* key, const std::set<std::string>& declared) {
  const std::string name = f.string(key);
  if (!declared.count(name)) throw DanglingReference(f.at(key), name);
}

void validate_events(const FieldCheck& f) {
  const Json& outcomes = f.required("outcomes");
  std::set<std::string> labels;
  if (outcomes.is_number_integer()) {
    const long m = f.integer("outcomes", 1, 64);
    for (long k = 1; k <= m; ++k) labels.insert(std::to_string(k));
  } else if (outcomes.is_array() && !outcomes.empty()) {
    for (const auto& o : outcomes) {
      if (!o.is_string()) throw ParseError(f.at("outcomes"), "outcome labels must be strings");
      if (!labels.insert(o.get<std::string>()).second) throw ParseError(f.at("outcomes"), "repeated outcome label");
    }
  } else {
    throw ParseError(f.at("outcomes"), "expected a count or a list of labels");
  }
  if (f.has("mu")) {
    const Json& mu = f.params["mu"];
    if (!mu.is_array() || mu.size() != labels.size()) throw ParseError(f.at("mu"), "needs one weight per outcome");
    for (const auto& w : mu)
      if (!w.is_number()) throw ParseError(f.at("mu"), "weights must be numbers");
  }
  for (const char* key : {"A", "B"}) {
    const Json& e = f.required(key);
    if (!e.is_array()) throw ParseError(f.at(key), "expected a list of outcomes");
    for (const auto& x : e) {
      const std::string label = x.is_string() ? x.get<std::string>() : x.is_number_integer() ? std::to_string(x.get<long>()) : "";
      if (!labels.count(label)) throw ParseError(f.at(key), "unknown outcome " + x.dump());
    }
  }
}

void validate_task(const Task& task, const std::string& path, std::set<std::string>& algebras) {
  const FieldCheck f{task.params, path};
  const std::string& kind = task.kind;
  if (kind == "generate_algebra") {
    f.only({"name", "generators", "n", "preset", "tensor", "commutant_of", "expect_dim"});
    const std::string name = f.string("name");
    const int sources = int(f.has("generators")) + int(f.has("preset")) + int(f.has("tensor")) + int(f.has("commutant_of"));
    if (sources != 1) throw ParseError(path, "give exactly one of generators, preset, tensor, commutant_of");
    if (f.has("generators")) {
      const Json& g = f.params["generators"];
      if (!g.is_array()) throw ParseError(f.at("generators"), "expected a list of matrices");
      Index n = f.has("n") ? f.integer("n", 1, 64) : -1;
      for (std::size_t k = 0; k < g.size(); ++k) {
        const CMatrix m = parse_matrix(g[k], f.at("generators") + "[" + std::to_string(k) + "]");
        if (m.rows() != m.cols()) throw ParseError(f.at("generators"), "generators must be square");
        if (n < 0) n = m.rows();
        if (m.rows() != n) throw ParseError(f.at("generators"), "generators have different sizes");
      }
      if (n < 0) throw ParseError(f.at("n"), "needed when the generator list is empty");
    } else if (f.has("preset")) {
      const std::string p = f.string("preset");
      if (p != "full" && p != "diagonal" && p != "scalar") throw ParseError(f.at("preset"), "expected full, diagonal or scalar");
      f.integer("n", 1, 64);
    } else if (f.has("tensor")) {
      const FieldCheck t{f.params["tensor"], f.at("tensor")};
      t.only({"d1", "d2", "slot"});
      t.integer("d1", 1, 8);
      t.integer("d2", 1, 8);
      const std::string slot = t.string("slot");
      if (slot != "first" && slot != "second") throw ParseError(t.at("slot"), "expected first or second");
    } else {
      check_reference(f, "commutant_of", algebras);
    }
    if (f.has("expect_dim")) f.integer("expect_dim", 0, 64 * 64);
    algebras.insert(name);
  } else if (kind == "classical_posterior") {
    f.only({"name", "outcomes", "mu", "A", "B", "expect"});
    validate_events(f);
    if (f.has("expect")) f.number("expect");
  } else if (kind == "bayes_update") {
    f.only({"name", "total", "accessible", "state", "prior", "observables", "expect_feasible"});
    check_reference(f, "total", algebras);
    check_reference(f, "accessible", algebras);
    f.matrix("state");
    if (f.has("prior")) {
      const Json& p = f.params["prior"];
      if (!(p.is_string() && p.get<std::string>() == "tracial")) f.matrix("prior");
    }
    if (f.has("observables")) {
      const Json& o = f.params["observables"];
      if (!o.is_array()) throw ParseError(f.at("observables"), "expected a list of matrices");
      for (std::size_t k = 0; k < o.size(); ++k) parse_matrix(o[k], f.at("observables") + "[" + std::to_string(k) + "]");
    }
    if (f.has("expect_feasible")) f.boolean("expect_feasible");
  } else if (kind == "takesaki") {
    f.only({"name", "algebra", "state", "sub", "expect_feasible"});
    check_reference(f, "algebra", algebras);
    check_reference(f, "sub", algebras);
    f.matrix("state");
    if (f.has("expect_feasible")) f.boolean("expect_feasible");
  } else if (kind == "kms") {
    f.only({"name", "algebra", "state", "hamiltonian", "beta", "expect_kms"});
    if (f.has("algebra")) check_reference(f, "algebra", algebras);
    f.matrix("state");
    const Json& h = f.required("hamiltonian");
    if (!(h.is_string() && h.get<std::string>() == "modular")) f.matrix("hamiltonian");
    f.number("beta");
    if (f.has("expect_kms")) f.boolean("expect_kms");
  } else if (kind == "wedge_classify") {
    f.only({"name", "points", "expect", "flow_times", "samples"});
    const Json& pts = f.required("points");
    if (!pts.is_array()) throw ParseError(f.at("points"), "expected a list of points");
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Json& p = pts[k];
      if (!p.is_array() || p.size() < 2 || !std::all_of(p.begin(), p.end(), [](const Json& x) { return x.is_number(); }))
        throw ParseError(f.at("points") + "[" + std::to_string(k) + "]", "expected at least two coordinates");
    }
    if (f.has("expect")) {
      const Json& e = f.params["expect"];
      if (!e.is_array() || e.size() != pts.size()) throw ParseError(f.at("expect"), "needs one label per point");
    }
    if (f.has("flow_times")) {
      const Json& t = f.params["flow_times"];
      if (!t.is_array()) throw ParseError(f.at("flow_times"), "expected a list of numbers");
      for (const auto& x : t)
        if (!x.is_number()) throw ParseError(f.at("flow_times"), "expected a list of numbers");
    }
    if (f.has("samples")) f.integer("samples", 0, 1000000);
  } else if (kind == "killing_audit") {
    f.only({"name", "dim", "include_dilation"});
    f.integer("dim", 2, 16);
    if (f.has("include_dilation")) f.boolean("include_dilation");
  } else if (kind == "ds_tangency") {
    f.only({"name", "dim", "samples", "tau_max"});
    f.integer("dim", 2, 16);
    if (f.has("samples")) f.integer("samples", 1, 1000000);
    if (f.has("tau_max")) f.number("tau_max");
  } else if (kind == "tfd_demo") {
    f.only({"name", "levels", "beta"});
    f.integer("levels", 2, 8);
    if (f.has("beta")) f.number("beta");
  } else if (kind == "chain_run") {
    f.only({"name", "sites", "mass", "coupling", "half", "window", "expect_decreasing"});
    const Json& s = f.required("sites");
    if (s.is_array()) {
      if (s.empty()) throw ParseError(f.at("sites"), "expected at least one size");
      for (const auto& n : s)
        if (!n.is_number_integer() || n.get<long>() < 4 || n.get<long>() > 1000)
          throw ParseError(f.at("sites"), "sizes must be integers in [4, 1000]");
    } else {
      f.integer("sites", 4, 1000);
    }
    if (f.has("mass")) f.number("mass");
    if (f.has("coupling")) f.number("coupling");
    if (f.has("half")) {
      const std::string h = f.string("half");
      if (h != "left" && h != "right") throw ParseError(f.at("half"), "expected left or right");
    }
    if (f.has("window")) f.integer("window", 1, 1000);
    if (f.has("expect_decreasing")) f.boolean("expect_decreasing");
  }
  if (f.has("name") && !f.params["name"].is_string()) throw ParseError(f.at("name"), "expected a string");
}

std::string line_of(std::string_view text, std::size_t byte) {
  const auto end = std::min(byte, text.size());
  return "line " + std::to_string(1 + std::count(text.begin(), text.begin() + static_cast<long>(end), '\n'));
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) throw ParseError("$", "scenario must be an object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "name" && it.key() != "seed" && it.key() != "tol" && it.key() != "tasks")
      throw ParseError("$." + it.key(), "unexpected field");

  Scenario s;
  if (!doc.contains("name") || !doc["name"].is_string()) throw ParseError("$.name", "missing scenario name");
  s.name = doc["name"].get<std::string>();
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ParseError("$.seed", "expected an unsigned integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number() || !(doc["tol"].get<double>() > 0.0)) throw ParseError("$.tol", "expected a positive number");
    s.tol = doc["tol"].get<double>();
  }
  const Json tasks = doc.value("tasks", Json::array());
  if (!tasks.is_array()) throw ParseError("$.tasks", "expected a list of tasks");

  std::set<std::string> algebras;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string path = "$.tasks[" + std::to_string(i) + "]";
    const Json& t = tasks[i];
    if (!t.is_object()) throw ParseError(path, "task must be an object");
    if (!t.contains("kind") || !t["kind"].is_string()) throw ParseError(path + ".kind", "missing task kind");
    Task task{t["kind"].get<std::string>(), t};
    task.params.erase("kind");
    const auto& kinds = task_kinds();
    if (std::find(kinds.begin(), kinds.end(), task.kind) == kinds.end()) throw UnknownTask(path + ".kind", task.kind);
    validate_task(task, path, algebras);
    s.tasks.push_back(std::move(task));
  }
  return s;
}

std::string serialize(const Scenario& s) {
  Json doc;
  doc["name"] = s.name;
  doc["seed"] = s.seed;
  doc["tol"] = s.tol;
  doc["tasks"] = Json::array();
  for (const auto& t : s.tasks) {
    Json j = t.params;
    j["kind"] = t.kind;
    doc["tasks"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

bool equivalent(const Scenario& a, const Scenario& b) {
  if (a.name != b.name || a.seed != b.seed || a.tol != b.tol || a.tasks.size() != b.tasks.size()) return false;
  for (std::size_t i = 0; i < a.tasks.size(); ++i)
    if (a.tasks[i].kind != b.tasks[i].kind || a.tasks[i].params != b.tasks[i].params) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Execution

std::string to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::Pass: return "pass";
    case TaskStatus::Fail: return "fail";
    case TaskStatus::Infeasible: return "infeasible";
    case TaskStatus::Error: return "error";
  }
  return "?";
}

std::size_t Report::count(TaskStatus status) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [status](const TaskRecord& r) { return r.status == status; }));
}

int Report::exit_code() const {
  if (count(TaskStatus::Error) > 0) return 2;
  if (count(TaskStatus::Fail) > 0) return 1;
  return 0;
}

namespace {

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

struct Context {
  const Scenario& scenario;
  Tolerances tol;
  std::map<std::string, AlgebraPtr> algebras;
  std::set<std::string> failed;  // names whose producing task did not complete
};

AlgebraPtr lookup(Context& ctx, const std::string& name) {
  if (ctx.failed.count(name)) throw Error("algebra '" + name + "' was not produced (its task failed)");
  auto it = ctx.algebras.find(name);
  if (it == ctx.algebras.end()) throw Error("algebra '" + name + "' is not declared");
  return it->second;
}

AlgState state_on(const AlgebraPtr& alg, const CMatrix& rho, const Tolerances& tol) {
  if (rho.rows() != alg->ambient_dim() || rho.cols() != alg->ambient_dim())
    throw InvalidArgument("state size " + std::to_string(rho.rows()) + " does not match the algebra's ambient dimension " +
                          std::to_string(alg->ambient_dim()));
  return AlgState(alg, rho, tol);
}

// Applies an optional feasibility assertion to a feasibility outcome.
void feasibility_status(TaskRecord& rec, bool feasible, const Json& params) {
  rec.status = feasible ? TaskStatus::Pass : TaskStatus::Infeasible;
  if (params.contains("expect_feasible")) {
    const bool want = params["expect_feasible"].get<bool>();
    if (want != feasible) {
      rec.status = TaskStatus::Fail;
      rec.message = want ? "asserted feasible, found infeasible" : "asserted infeasible, found feasible";
    }
  }
}

void run_generate_algebra(Context& ctx, const Json& p, TaskRecord& rec) {
  const std::string name = p["name"].get<std::string>();
  ctx.failed.insert(name);
  auto build = [&]() -> AlgebraBasis {
    if (p.contains("generators")) {
      std::vector<CMatrix> gens;
      for (const auto& g : p["generators"]) gens.push_back(parse_matrix(g));
      const Index n = p.contains("n") ? p["n"].get<Index>() : gens.front().rows();
      return generate_algebra(n, gens, ctx.tol);
    }
    if (p.contains("preset")) {
      const std::string preset = p["preset"].get<std::string>();
      const Index n = p["n"].get<Index>();
      return preset == "full" ? full_matrix_algebra(n) : preset == "diagonal" ? diagonal_algebra(n) : scalar_algebra(n);
    }
    if (p.contains("tensor")) {
      const Json& t = p["tensor"];
      return tensor_factor_algebra(t["d1"].get<Index>(), t["d2"].get<Index>(),
                                   t["slot"].get<std::string>() == "first" ? TensorSlot::First : TensorSlot::Second);
    }
    return commutant(*lookup(ctx, p["commutant_of"].get<std::string>()), ctx.tol);
  };
  const AlgebraBasis alg = build();
  rec.values["ambient_dim"] = alg.ambient_dim();
  rec.values["dim"] = alg.dim();
  rec.values["closure_residual"] = alg.closure_residual();
  rec.values["orthonormality_residual"] = alg.orthonormality_residual();
  rec.values["contains_identity"] = alg.contains_identity();
  ctx.algebras[name] = share(alg);
  ctx.failed.erase(name);
  if (p.contains("expect_dim") && p["expect_dim"].get<Index>() != rec.values["dim"].get<Index>()) {
    rec.status = TaskStatus::Fail;
    rec.message = "expected dimension " + p["expect_dim"].dump();
  }
}

void run_classical_posterior(Context& ctx, const Json& p, TaskRecord& rec) {
  std::vector<std::string> labels;
  if (p["outcomes"].is_number_integer()) {
    for (long k = 1; k <= p["outcomes"].get<long>(); ++k) labels.push_back(std::to_string(k));
  } else {
    for (const auto& o : p["outcomes"]) labels.push_back(o.get<std::string>());
  }
  std::vector<double> mu(labels.size(), 1.0 / double(labels.size()));
  if (p.contains("mu")) mu = p["mu"].get<std::vector<double>>();
  const FiniteProbabilitySpace space(labels, mu, ctx.tol.tol);
  auto event = [&](const Json& e) {
    Event out;
    for (const auto& x : e) {
      const std::string label = x.is_string() ? x.get<std::string>() : std::to_string(x.get<long>());
      out.push_back(static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) - labels.begin()));
    }
    return out;
  };
  const Event a = event(p["A"]);
  const Event b = event(p["B"]);
  const double classical = classical_posterior(space, b, a);
  const double residual = classical_equivalence_check(space, b, a, ctx.tol);
  rec.values["classical_posterior"] = classical;
  rec.values["nc_residual"] = residual;
  rec.status = residual <= ctx.tol.tol ? TaskStatus::Pass : TaskStatus::Fail;
  if (rec.status == TaskStatus::Fail) rec.message = "noncommutative update disagrees with the classical posterior";
  if (p.contains("expect")) {
    const double want = parse_scalar(p["expect"], "expect");
    rec.values["expected"] = want;
    if (std::abs(classical - want) > ctx.tol.tol) {
      rec.status = TaskStatus::Fail;
      rec.message = "classical posterior differs from the expected value";
    }
  }
}

void run_bayes_update(Context& ctx, const Json& p, TaskRecord& rec) {
  const AlgebraPtr total = lookup(ctx, p["total"].get<std::string>());
  const AlgebraPtr accessible = lookup(ctx, p["accessible"].get<std::string>());
  const AlgState truth = state_on(total, parse_matrix(p["state"]), ctx.tol);
  PriorPolicy prior = TracialPrior{};
  if (p.contains("prior") && p["prior"] != "tracial") prior = state_on(total, parse_matrix(p["prior"]), ctx.tol);
  const InferenceResult result = nc_bayes_update({total, accessible, truth, prior}, ctx.tol);
  rec.values["feasible"] = result.feasible;
  rec.values["takesaki_residual"] = result.diagnostics.takesaki_residual;
  rec.values["ill_conditioned_prior"] = result.diagnostics.ill_conditioned_prior;
  if (result.diagnostics.ce) rec.values["ce_residual"] = result.diagnostics.ce->max();
  if (result.posterior && p.contains("observables")) {
    Json values = Json::array();
    for (const auto& o : p["observables"]) values.push_back(complex_json((*result.posterior)(parse_matrix(o))));
    rec.values["posterior"] = values;
  }
  feasibility_status(rec, result.feasible, p);
  if (!result.feasible && rec.message.empty()) rec.message = "modular flow of the prior does not preserve the accessible algebra";
}

void run_takesaki(Context& ctx, const Json& p, TaskRecord& rec) {
  const AlgebraPtr alg = lookup(ctx, p["algebra"].get<std::string>());
  const AlgebraPtr sub = lookup(ctx, p["sub"].get<std::string>());
  const AlgState state = state_on(alg, parse_matrix(p["state"]), ctx.tol);
  const double residual = takesaki_check(state, *sub);
  rec.values["modular_residual"] = residual;
  feasibility_status(rec, residual <= ctx.tol.tol, p);
  if (rec.status == TaskStatus::Infeasible) rec.message = "no state-preserving conditional expectation onto the subalgebra";
}

void run_kms(Context& ctx, const Json& p, TaskRecord& rec) {
  const CMatrix rho = parse_matrix(p["state"]);
  const AlgebraPtr alg = p.contains("algebra") ? lookup(ctx, p["algebra"].get<std::string>()) : share(full_matrix_algebra(rho.rows()));
  const AlgState state = state_on(alg, rho, ctx.tol);
  const bool modular = p["hamiltonian"].is_string() && p["hamiltonian"].get<std::string>() == "modular";
  const CMatrix h = modular ? modular_hamiltonian(state) : parse_matrix(p["hamiltonian"]);
  const double beta = parse_scalar(p["beta"], "beta");
  const double residual = kms_residual(state, h, beta);
  rec.values["beta"] = beta;
  rec.values["kms_residual"] = residual;
  const bool want = p.value("expect_kms", true);
  const bool is_kms = residual <= ctx.tol.tol;
  rec.status = is_kms == want ? TaskStatus::Pass : TaskStatus::Fail;
  if (rec.status == TaskStatus::Fail) rec.message = want ? "state is not KMS for this flow" : "state is unexpectedly KMS";
}

constexpr const char* kLabelingNote =
    "the boost field is timelike on the W3/W4 labels and spacelike on W1/W2, opposite to the claim that it is timelike "
    "in W1 and W2";

void run_wedge_classify(Context& ctx, const Json& p, TaskRecord& rec) {
  const std::vector<double> times = p.contains("flow_times") ? p["flow_times"].get<std::vector<double>>()
                                                             : std::vector<double>{-5.0, -1.0, 0.5, 3.0};
  const auto boost = lorentz_generator<double>(4, 0, 1);
  bool ok = true;
  std::size_t mismatches = 0, not_invariant = 0;
  std::map<std::string, std::map<std::string, int>> audit;  // label -> character -> count
  auto invariant = [&](const RVector& x, WedgeLabel label) {
    for (double t : times) {
      const WedgeLabel moved = wedge_classify(boost_flow(x, t));
      if (moved != label) return false;
    }
    return true;
  };
  for (std::size_t k = 0; k < p["points"].size(); ++k) {
    const auto coords = p["points"][k].get<std::vector<double>>();
    const RVector x = Eigen::Map<const RVector>(coords.data(), static_cast<Index>(coords.size()));
    const WedgeLabel label = wedge_classify(x);
    const bool inv = invariant(x, label);
    RVector x4 = RVector::Zero(4);
    x4.head(std::min<Index>(4, x.size())) = x.head(std::min<Index>(4, x.size()));
    const std::string character = to_string(timelike_character(boost, x4));
    Json row{{"point", coords}, {"label", to_string(label)}, {"flow_invariant", inv}, {"boost_character", character}};
    if (p.contains("expect")) {
      const bool match = p["expect"][k].get<std::string>() == to_string(label);
      row["expected"] = p["expect"][k];
      if (!match) ++mismatches;
    }
    if (!inv) ++not_invariant;
    ++audit[to_string(label)][character];
    rec.table.push_back(std::move(row));
  }
  if (p.contains("samples")) {
    std::mt19937_64 rng(ctx.scenario.seed + rec.index);
    std::normal_distribution<double> normal(0.0, 2.0);
    std::uniform_real_distribution<double> flow(-5.0, 5.0);
    const long n = p["samples"].get<long>();
    long sampled_fail = 0;
    for (long k = 0; k < n; ++k) {
      RVector x(4);
      for (Index i = 0; i < 4; ++i) x(i) = normal(rng);
      const WedgeLabel label = wedge_classify(x);
      if (wedge_classify(boost_flow(x, flow(rng))) != label) ++sampled_fail;
    }
    rec.values["sampled_points"] = n;
    rec.values["sampled_not_invariant"] = sampled_fail;
    not_invariant += static_cast<std::size_t>(sampled_fail);
  }
  rec.values["audit"] = audit;
  rec.values["label_mismatches"] = mismatches;
  rec.values["not_invariant"] = not_invariant;
  rec.values["labeling_note"] = kLabelingNote;
  ok = mismatches == 0 && not_invariant == 0;
  rec.status = ok ? TaskStatus::Pass : TaskStatus::Fail;
  if (!ok) rec.message = "wedge labels disagree with expectations or with the boost flow";
}

void run_killing_audit(Context&, const Json& p, TaskRecord& rec) {
  const int d = p["dim"].get<int>();
  auto fields = poincare_generators<int>(d);
  bool ok = true;
  for (const auto& f : fields) {
    const int r = killing_residual(f);
    rec.table.push_back(Json{{"field", f.name}, {"killing_residual", r}});
    ok = ok && r == 0;
  }
  if (p.value("include_dilation", false)) {
    const int r = killing_residual(dilation<int>(d));
    rec.table.push_back(Json{{"field", "D"}, {"killing_residual", r}});
    rec.values["dilation_is_killing"] = r == 0;
    ok = ok && r != 0;
  }
  const int iso = isometry_algebra_dim(FlatSpace(d));
  rec.values["field_count"] = fields.size();
  rec.values["isometry_algebra_dim"] = iso;
  rec.values["expected_dim"] = d * (d + 1) / 2;
  ok = ok && iso == d * (d + 1) / 2 && static_cast<int>(fields.size()) == iso;
  rec.status = ok ? TaskStatus::Pass : TaskStatus::Fail;
  if (!ok) rec.message = "Killing audit failed";
}

void run_ds_tangency(Context& ctx, const Json& p, TaskRecord& rec) {
  const int d = p["dim"].get<int>();
  const auto samples = static_cast<std::size_t>(p.value("samples", 1000L));
  const double tau_max = p.contains("tau_max") ? parse_scalar(p["tau_max"], "tau_max") : 2.0;
  const auto points = sample_hyperboloid(d, samples, ctx.scenario.seed + rec.index, tau_max);
  double worst = 0.0;
  for (const auto& f : lorentz_generators<double>(d))
    for (const auto& x : points) worst = std::max(worst, ds_tangency_residual(f, x, ctx.tol.tol));
  double min_fraction = 1.0;
  for (int i = 0; i < d; ++i) {
    const auto f = translation<double>(d, i);
    std::size_t non_tangent = 0;
    for (const auto& x : points)
      if (ds_tangency_residual(f, x, ctx.tol.tol) > ctx.tol.tol) ++non_tangent;
    const double fraction = double(non_tangent) / double(points.size());
    min_fraction = std::min(min_fraction, fraction);
    rec.table.push_back(Json{{"field", f.name}, {"non_tangent_fraction", fraction}});
  }
  rec.values["samples"] = points.size();
  rec.values["max_lorentz_residual"] = worst;
  rec.values["min_translation_non_tangent_fraction"] = min_fraction;
  const bool ok = worst <= ctx.tol.tol && min_fraction >= 0.99;
  rec.status = ok ? TaskStatus::Pass : TaskStatus::Fail;
  if (!ok) rec.message = "tangency audit failed";
}

void run_tfd_demo(Context& ctx, const Json& p, TaskRecord& rec) {
  const double beta = p.contains("beta") ? parse_scalar(p["beta"], "beta") : 2.0 * std::numbers::pi;
  const WedgeDemo demo = modified_bayes_demo(p["levels"].get<Index>(), beta, ctx.tol);
  rec.values["beta"] = beta;
  rec.values["kms_residual"] = demo.kms_residual;
  rec.values["feasible"] = demo.result.feasible;
  rec.values["takesaki_residual"] = demo.result.diagnostics.takesaki_residual;
  if (demo.result.diagnostics.ce) rec.values["ce_residual"] = demo.result.diagnostics.ce->max();
  const bool ok = demo.kms_residual <= ctx.tol.tol && demo.result.feasible;
  rec.status = ok ? TaskStatus::Pass : TaskStatus::Fail;
  if (!ok) rec.message = "thermofield double demo failed";
}

void run_chain_run(Context& ctx, const Json& p, TaskRecord& rec) {
  std::vector<int> sizes;
  if (p["sites"].is_array()) sizes = p["sites"].get<std::vector<int>>();
  else sizes.push_back(p["sites"].get<int>());
  const double mass = p.contains("mass") ? parse_scalar(p["mass"], "mass") : 1e-3;
  const double coupling = p.contains("coupling") ? parse_scalar(p["coupling"], "coupling") : 1.0;
  const ChainHalf half = p.value("half", std::string("left")) == "right" ? ChainHalf::Right : ChainHalf::Left;
  const int window = p.value("window", 6);
  const std::string stem = rec.name.empty() ? "chain_" + std::to_string(rec.index) : rec.name;

  bool ok = true;
  std::vector<double> summaries;
  for (int n : sizes) {
    const HarmonicChain chain(n, mass, coupling);
    const auto ground = ground_state<double>(chain);
    const RVector nu = symplectic_spectrum(ground);
    const double purity = (nu.array() - 0.5).abs().maxCoeff();
    const BoostComparison cmp = boost_comparison(chain, half, window);
    summaries.push_back(cmp.summary_deviation);
    const bool pure = purity <= ctx.tol.tol;
    const bool reconstructs = cmp.reconstruction_residual <= 1e-8;
    ok = ok && pure && reconstructs;
    rec.table.push_back(Json{{"sites", n},
                             {"ground_purity_residual", purity},
                             {"summary_deviation", cmp.summary_deviation},
                             {"slope_ratio", cmp.slope_ratio},
                             {"increasing_near_cut", cmp.increasing_first_quarter},
                             {"precision_digits", cmp.digits},
                             {"reconstruction_residual", cmp.reconstruction_residual}});
    std::ostringstream csv;
    write_profile_csv(csv, cmp);
    rec.artifacts.push_back({stem + "_N" + std::to_string(n) + ".csv", csv.str()});
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < summaries.size(); ++k) decreasing = decreasing && summaries[k] < summaries[k - 1];
  rec.values["strictly_decreasing"] = decreasing;
  if (p.value("expect_decreasing", sizes.size() > 1)) ok = ok && decreasing;
  rec.status = ok ? TaskStatus::Pass : TaskStatus::Fail;
  if (!ok) rec.message = "chain run failed its checks";
}

}  // namespace

Report run_scenario(const Scenario& s) {
  Report report;
  report.scenario = s.name;
  report.seed = s.seed;
  report.tol = s.tol;
  Context ctx{s, Tolerances{}, {}, {}};
  ctx.tol.tol = s.tol;
  for (std::size_t i = 0; i < s.tasks.size(); ++i) {
    const Task& task = s.tasks[i];
    TaskRecord rec;
    rec.index = i;
    rec.kind = task.kind;
    rec.name = task.params.value("name", std::string());
    try {
      const Json& p = task.params;
      if (task.kind == "generate_algebra") run_generate_algebra(ctx, p, rec);
      else if (task.kind == "classical_posterior") run_classical_posterior(ctx, p, rec);
      else if (task.kind == "bayes_update") run_bayes_update(ctx, p, rec);
      else if (task.kind == "takesaki") run_takesaki(ctx, p, rec);
      else if (task.kind == "kms") run_kms(ctx, p, rec);
      else if (task.kind == "wedge_classify") run_wedge_classify(ctx, p, rec);
      else if (task.kind == "killing_audit") run_killing_audit(ctx, p, rec);
      else if (task.kind == "ds_tangency") run_ds_tangency(ctx, p, rec);
      else if (task.kind == "tfd_demo") run_tfd_demo(ctx, p, rec);
      else if (task.kind == "chain_run") run_chain_run(ctx, p, rec);
      else throw UnknownTask("kind", task.kind);
    } catch (const std::exception& e) {
      rec.status = TaskStatus::Error;
      rec.message = e.what();
      rec.artifacts.clear();
    }
    report.records.push_back(std::move(rec));
  }
  return report;
}

std::string to_records(const Report& report) {
  std::string out;
  for (const auto& r : report.records) {
    Json j{{"scenario", report.scenario}, {"index", r.index},   {"kind", r.kind},
           {"name", r.name},             {"status", to_string(r.status)}, {"message", r.message},
           {"values", r.values}};
    if (!r.table.empty()) j["table"] = r.table;
    if (!r.artifacts.empty()) {
      Json files = Json::array();
      for (const auto& a : r.artifacts) files.push_back(a.filename);
      j["artifacts"] = files;
    }
    out += j.dump() + "\n";
  }
  return out;
}

namespace {
std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}
}  // namespace

std::string to_text(const Report& report) {
  std::ostringstream os;
  os << "scenario " << report.scenario << " (seed " << report.seed << ", tol " << report.tol << ")\n";
  for (const auto& r : report.records) {
    os << "[" << r.index << "] " << r.kind;
    if (!r.name.empty()) os << " " << r.name;
    os << ": " << to_string(r.status);
    if (!r.message.empty()) os << " - " << r.message;
    os << "\n";
    for (auto it = r.values.begin(); it != r.values.end(); ++it) os << "    " << it.key() << " = " << scalar_text(it.value()) << "\n";
    if (!r.table.empty()) {
      std::vector<std::string> columns;
      for (auto it = r.table.front().begin(); it != r.table.front().end(); ++it) columns.push_back(it.key());
      os << "    |";
      for (const auto& c : columns) os << " " << c << " |";
      os << "\n";
      for (const auto& row : r.table) {
        os << "    |";
        for (const auto& c : columns) os << " " << (row.contains(c) ? scalar_text(row[c]) : "") << " |";
        os << "\n";
      }
    }
    for (const auto& a : r.artifacts) os << "    wrote " << a.filename << "\n";
  }
  os << "summary: " << report.count(TaskStatus::Pass) << " pass, " << report.count(TaskStatus::Fail) << " fail, "
     << report.count(TaskStatus::Infeasible) << " infeasible, " << report.count(TaskStatus::Error) << " error\n";
  return os.str();
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
  };
  write(dir / "report.jsonl", to_records(report));
  write(dir / "report.txt", to_text(report));
  for (const auto& r : report.records)
    for (const auto& a : r.artifacts) write(dir / a.filename, a.content);
}

}  // namespace ncbayes
