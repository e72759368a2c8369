#include "stlopt/scenario.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace stlopt {

using nlohmann::json;

LtiDynamics double_integrator() {
  Mat A = Mat::Identity(4, 4);
  A(0, 2) = 1.0;
  A(1, 3) = 1.0;
  Mat B = Mat::Zero(4, 2);
  B(2, 0) = 1.0;
  B(3, 1) = 1.0;
  return LtiDynamics(A, B);
}

Vec UnicycleDynamics::step(const Vec& x, const Vec& u) const {
  Vec next(3);
  next[0] = x[0] + dt_ * u[0] * std::cos(x[2]);
  next[1] = x[1] + dt_ * u[0] * std::sin(x[2]);
  next[2] = x[2] + dt_ * u[1];
  return next;
}

Mat UnicycleDynamics::jac_state(const Vec& x, const Vec& u) const {
  Mat J = Mat::Identity(3, 3);
  J(0, 2) = -dt_ * u[0] * std::sin(x[2]);
  J(1, 2) = dt_ * u[0] * std::cos(x[2]);
  return J;
}

Mat UnicycleDynamics::jac_input(const Vec& x, const Vec&) const {
  Mat J = Mat::Zero(3, 2);
  J(0, 0) = dt_ * std::cos(x[2]);
  J(1, 0) = dt_ * std::sin(x[2]);
  J(2, 1) = dt_;
  return J;
}

Predicate circle_predicate(const std::string& name, const Vec& center,
                           double radius, bool inside) {
  if (radius <= 0) throw std::invalid_argument("circle radius must be positive");
  if (center.size() != 2) throw std::invalid_argument("circle center must be 2d");
  Predicate p;
  p.name = name;
  double cx = center[0], cy = center[1], r2 = radius * radius;
  double sign = inside ? 1.0 : -1.0;
  p.h = [cx, cy, r2, sign](const Vec& x) {
    double dx = x[0] - cx, dy = x[1] - cy;
    return sign * (r2 - dx * dx - dy * dy);
  };
  p.grad = [cx, cy, sign](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    g[0] = sign * (-2.0 * (x[0] - cx));
    g[1] = sign * (-2.0 * (x[1] - cy));
    return g;
  };
  return p;
}

Predicate halfplane_predicate(const std::string& name, const Vec& normal,
                              double offset) {
  if (normal.size() == 0 || normal.norm() == 0.0)
    throw std::invalid_argument("halfplane normal must be non-zero");
  Predicate p;
  p.name = name;
  Vec nrm = normal;
  p.h = [nrm, offset](const Vec& x) {
    return nrm.dot(x.head(nrm.size())) - offset;
  };
  p.grad = [nrm](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    g.head(nrm.size()) = nrm;
    return g;
  };
  return p;
}

Predicate PredicateSpec::materialize() const {
  if (type == "circle") return circle_predicate(name, center, radius, inside);
  if (type == "halfplane") return halfplane_predicate(name, normal, offset);
  throw std::invalid_argument("unknown predicate type '" + type + "'");
}

Predicate Scenario::lookup(const std::string& pred_name) const {
  for (const auto& spec : predicates)
    if (spec.name == pred_name) return spec.materialize();
  throw std::out_of_range("unknown predicate '" + pred_name + "'");
}

FormulaPtr Scenario::formula() const {
  return parse(formula_text, [this](const std::string& n) { return lookup(n); });
}

Trajectory Scenario::rollout(const Mat& inputs) const {
  Trajectory traj;
  traj.T = T;
  const int n = dynamics->state_dim(), m = dynamics->input_dim();
  if (inputs.rows() != m || inputs.cols() < T + 1)
    throw std::invalid_argument("rollout: input schedule shape mismatch");
  traj.states = Mat::Zero(n, T + 1);
  traj.inputs = inputs.leftCols(T + 1);
  traj.states.col(0) = x0;
  for (int t = 0; t < T; ++t)
    traj.states.col(t + 1) = dynamics->step(traj.states.col(t), traj.inputs.col(t));
  return traj;
}

Trajectory Scenario::reference_trajectory() const {
  if (reference_inputs) return rollout(*reference_inputs);
  return rollout(Mat::Zero(dynamics->input_dim(), T + 1));
}

/* ---------------------------- builtins ------------------------------ */

namespace {

/* Four half-planes whose conjunction is the axis-aligned rectangle. */
void add_rectangle(std::vector<PredicateSpec>& out, const std::string& base,
                   double xmin, double xmax, double ymin, double ymax) {
  auto hp = [&](const std::string& suffix, double nx, double ny, double off) {
    PredicateSpec s;
    s.name = base + "_" + suffix;
    s.type = "halfplane";
    s.normal = Vec(2);
    s.normal << nx, ny;
    s.offset = off;
    out.push_back(std::move(s));
  };
  hp("l", 1, 0, xmin);
  hp("r", -1, 0, -xmax);
  hp("b", 0, 1, ymin);
  hp("t", 0, -1, -ymax);
}

std::string rect_term(const std::string& base) {
  return "(" + base + "_l and " + base + "_r and " + base + "_b and " +
         base + "_t)";
}

Box big_box(int n, double lim = 20.0) {
  Box b;
  b.lower = Vec::Constant(n, -lim);
  b.upper = Vec::Constant(n, lim);
  return b;
}

Scenario linear_base(const std::string& name, int T) {
  Scenario s;
  s.name = name;
  s.dynamics = std::make_shared<LtiDynamics>(double_integrator());
  s.dynamics_type = "double_integrator";
  s.T = T;
  s.x0 = Vec::Zero(4);
  s.weights.alpha = 1.0;
  Vec qdiag(4);
  qdiag << 0, 0, 1, 1;
  s.weights.Q = qdiag.asDiagonal();
  s.weights.R = Mat::Identity(2, 2);
  s.state_box = big_box(4);
  s.input_box = big_box(2, 1.0);
  return s;
}

}  // namespace

Scenario builtin_scenario(const std::string& name, int linear_T) {
  const std::string Ts = std::to_string(linear_T);
  if (name == "two-target") {
    Scenario s = linear_base(name, linear_T);
    add_rectangle(s.predicates, "ta", 5, 7, 5, 7);
    add_rectangle(s.predicates, "tb", 5, 7, -7, -5);
    add_rectangle(s.predicates, "obs", -4, -2, -1, 1);
    s.formula_text = "(F[0," + Ts + "] " + rect_term("ta") + " or F[0," + Ts +
                     "] " + rect_term("tb") + ") and G[0," + Ts + "] not " +
                     rect_term("obs");
    // Accelerate diagonally toward target A, brake, then hold.
    Mat u = Mat::Zero(2, linear_T + 1);
    for (int t = 0; t < 3 && t < linear_T; ++t) u.col(t).setConstant(0.6);
    for (int t = 3; t < 6 && t < linear_T; ++t) u.col(t).setConstant(-0.6);
    s.reference_inputs = u;
    return s;
  }
  if (name == "many-target") {
    Scenario s = linear_base(name, linear_T);
    add_rectangle(s.predicates, "ta", 3, 5, 3, 5);
    add_rectangle(s.predicates, "tb", 3, 5, -5, -3);
    add_rectangle(s.predicates, "tc", -5, -3, 3, 5);
    add_rectangle(s.predicates, "obs", -1, 1, -5, -3);
    s.formula_text = "F[0," + Ts + "] " + rect_term("ta") + " and F[0," + Ts +
                     "] " + rect_term("tb") + " and F[0," + Ts + "] " +
                     rect_term("tc") + " and G[0," + Ts + "] not " +
                     rect_term("obs");
    return s;
  }
  if (name == "narrow-passage") {
    Scenario s = linear_base(name, linear_T);
    add_rectangle(s.predicates, "goal", 6, 8, -1, 1);
    add_rectangle(s.predicates, "obs1", 2, 4, 1, 6);
    add_rectangle(s.predicates, "obs2", 2, 4, -6, -1);
    s.formula_text = "F[0," + Ts + "] " + rect_term("goal") + " and G[0," +
                     Ts + "] (not " + rect_term("obs1") + " and not " +
                     rect_term("obs2") + ")";
    return s;
  }
  if (name == "door-puzzle") {
    Scenario s = linear_base(name, linear_T);
    add_rectangle(s.predicates, "key1", 1, 2, 4, 5);
    add_rectangle(s.predicates, "key2", 1, 2, -5, -4);
    add_rectangle(s.predicates, "door1", 3, 5, 3, 6);
    add_rectangle(s.predicates, "door2", 3, 5, -6, -3);
    add_rectangle(s.predicates, "goal", 7, 8, -1, 1);
    s.formula_text = "(not " + rect_term("door1") + ") U[0," + Ts + "] " +
                     rect_term("key1") + " and (not " + rect_term("door2") +
                     ") U[0," + Ts + "] " + rect_term("key2") + " and F[0," +
                     Ts + "] " + rect_term("goal");
    return s;
  }
  if (name == "nonlinear") {
    Scenario s;
    s.name = name;
    s.dt = 0.5;
    s.dynamics = std::make_shared<UnicycleDynamics>(s.dt);
    s.dynamics_type = "unicycle";
    s.T = 50;
    s.x0 = Vec(3);
    s.x0 << 2.0, 3.0, -M_PI / 2.0;
    s.weights.alpha = 10.0;
    s.weights.Q = Mat::Zero(3, 3);
    Vec rdiag(2);
    rdiag << 0.1, 1.0;
    s.weights.R = rdiag.asDiagonal();
    s.state_box = big_box(3);
    s.input_box = big_box(2, 1.0);
    auto circle = [&](const std::string& pname, double cx, double cy, double r) {
      PredicateSpec spec;
      spec.name = pname;
      spec.type = "circle";
      spec.center = Vec(2);
      spec.center << cx, cy;
      spec.radius = r;
      s.predicates.push_back(std::move(spec));
    };
    // stand-in circle layout, chosen to be reachable under |v| <= 1, dt = 0.5
    circle("mu1", 1.0, 1.0, 1.2);
    circle("mu2", 3.0, -1.0, 1.2);
    circle("mu3", 2.0, 0.0, 2.5);
    circle("mu4", -1.0, 3.0, 0.8);
    circle("mu5", 0.5, 3.0, 1.2);
    s.formula_text =
        "G[0,2] F[5,7] mu1 and F[15,17] G[2,5] mu2 and "
        "F[27,35] (mu3 U[2,10] mu1) and G[0,50] not mu4 and F[37,50] mu5";
    return s;
  }
  throw std::out_of_range("unknown builtin scenario '" + name + "'");
}

std::vector<Scenario> builtin_scenarios(int linear_T) {
  return {builtin_scenario("two-target", linear_T),
          builtin_scenario("many-target", linear_T),
          builtin_scenario("narrow-passage", linear_T),
          builtin_scenario("door-puzzle", linear_T),
          builtin_scenario("nonlinear", linear_T)};
}

/* ----------------------------- JSON io ------------------------------ */

namespace {

Vec vec_from_json(const json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json vec_to_json(const Vec& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

/* A list of numbers is read as a diagonal, a list of lists as full. */
Mat mat_from_json(const json& j) {
  if (j.empty()) return Mat();
  if (j[0].is_array()) {
    Mat m(static_cast<Eigen::Index>(j.size()),
          static_cast<Eigen::Index>(j[0].size()));
    for (size_t r = 0; r < j.size(); ++r)
      for (size_t c = 0; c < j[r].size(); ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            j[r][c].get<double>();
    return m;
  }
  Vec d = vec_from_json(j);
  return Mat(d.asDiagonal());
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json box_to_json(const Box& b) {
  return json{{"lower", vec_to_json(b.lower)}, {"upper", vec_to_json(b.upper)}};
}

Box box_from_json(const json& j) {
  Box b;
  b.lower = vec_from_json(j.at("lower"));
  b.upper = vec_from_json(j.at("upper"));
  return b;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  json j;
  in >> j;

  Scenario s;
  s.name = j.at("name").get<std::string>();
  const json& dyn = j.at("dynamics");
  s.dynamics_type = dyn.at("type").get<std::string>();
  if (s.dynamics_type == "double_integrator") {
    s.dynamics = std::make_shared<LtiDynamics>(double_integrator());
  } else if (s.dynamics_type == "unicycle") {
    s.dt = dyn.at("params").at("dt").get<double>();
    s.dynamics = std::make_shared<UnicycleDynamics>(s.dt);
  } else if (s.dynamics_type == "lti") {
    s.dynamics = std::make_shared<LtiDynamics>(
        mat_from_json(dyn.at("params").at("A")),
        mat_from_json(dyn.at("params").at("B")));
  } else {
    throw std::runtime_error("unknown dynamics type '" + s.dynamics_type + "'");
  }
  s.T = j.at("T").get<int>();
  s.x0 = vec_from_json(j.at("x0"));
  s.weights.alpha = j.at("alpha").get<double>();
  s.weights.Q = mat_from_json(j.at("Q"));
  s.weights.R = mat_from_json(j.at("R"));
  s.input_box = box_from_json(j.at("input_box"));
  s.state_box = box_from_json(j.at("state_box"));
  for (const auto& pj : j.at("predicates")) {
    PredicateSpec spec;
    spec.name = pj.at("name").get<std::string>();
    spec.type = pj.at("type").get<std::string>();
    const json& params = pj.at("params");
    if (spec.type == "circle") {
      spec.center = vec_from_json(params.at("center"));
      spec.radius = params.at("radius").get<double>();
      spec.inside = params.value("inside", true);
    } else if (spec.type == "halfplane") {
      spec.normal = vec_from_json(params.at("normal"));
      spec.offset = params.at("offset").get<double>();
    } else {
      throw std::runtime_error("unknown predicate type '" + spec.type + "'");
    }
    s.predicates.push_back(std::move(spec));
  }
  s.formula_text = j.at("formula").get<std::string>();
  if (j.contains("reference_inputs"))
    s.reference_inputs = mat_from_json(j.at("reference_inputs"));

  // validate: formula parses and fits the horizon
  FormulaPtr f = s.formula();
  if (horizon(*f) > s.T)
    throw std::runtime_error("formula horizon exceeds scenario T");
  if (s.x0.size() != s.dynamics->state_dim())
    throw std::runtime_error("x0 dimension mismatch");
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  json j;
  j["name"] = s.name;
  json dyn;
  dyn["type"] = s.dynamics_type;
  if (s.dynamics_type == "unicycle") {
    dyn["params"] = {{"dt", s.dt}};
  } else if (s.dynamics_type == "lti") {
    auto* lti = dynamic_cast<const LtiDynamics*>(s.dynamics.get());
    dyn["params"] = {{"A", mat_to_json(lti->A())}, {"B", mat_to_json(lti->B())}};
  } else {
    dyn["params"] = json::object();
  }
  j["dynamics"] = dyn;
  j["T"] = s.T;
  j["x0"] = vec_to_json(s.x0);
  j["alpha"] = s.weights.alpha;
  j["Q"] = mat_to_json(s.weights.Q);
  j["R"] = mat_to_json(s.weights.R);
  j["input_box"] = box_to_json(s.input_box);
  j["state_box"] = box_to_json(s.state_box);
  json preds = json::array();
  for (const auto& spec : s.predicates) {
    json p;
    p["name"] = spec.name;
    p["type"] = spec.type;
    if (spec.type == "circle")
      p["params"] = {{"center", vec_to_json(spec.center)},
                     {"radius", spec.radius},
                     {"inside", spec.inside}};
    else
      p["params"] = {{"normal", vec_to_json(spec.normal)},
                     {"offset", spec.offset}};
    preds.push_back(p);
  }
  j["predicates"] = preds;
  j["formula"] = s.formula_text;
  if (s.reference_inputs) j["reference_inputs"] = mat_to_json(*s.reference_inputs);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace stlopt
