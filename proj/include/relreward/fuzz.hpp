#ifndef RELREWARD_FUZZ_HPP_
#define RELREWARD_FUZZ_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "relreward/dsl/ast.hpp"
#include "relreward/dsl/printer.hpp"
#include "relreward/object_model.hpp"

// Random inputs for property tests: snapshots that follow a game's object
// registry, and random well-typed reward programs.
namespace relreward::fuzz {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

// Half of the snapshots cluster every object in a small window and snap
// coordinates to the integer grid, so collisions, touching edges and exact
// equalities come up often.
inline Snapshot random_snapshot(const std::string& game, Rng& rng,
                                std::int64_t t = 0) {
  const GameSchema& schema = schema_for(game);
  Snapshot s;
  s.t = t;
  bool cluster = coin(rng);
  double cx = uniform(rng, 0.0, 160.0), cy = uniform(rng, 0.0, 160.0);
  auto coord = [&](double c) {
    double v = cluster ? c + uniform(rng, -24.0, 24.0) : uniform(rng, -12.0, 172.0);
    return cluster ? std::round(v) : v;
  };
  for (const auto& cat : schema.categories) {
    int n = uniform_int(rng, 0, cat.max_count);
    for (int i = 0; i < n; ++i) {
      GameObject o;
      o.category = cat.name;
      o.x = coord(cx);
      o.y = coord(cy);
      if (coin(rng, 0.1)) o.y = 0.0;
      o.w = coin(rng, 0.8) ? cat.w : std::round(uniform(rng, 0.0, 24.0));
      o.h = coin(rng, 0.8) ? cat.h : std::round(uniform(rng, 0.0, 24.0));
      o.prev_x = coin(rng, 0.3) ? o.x : o.x - std::round(uniform(rng, -4.0, 4.0));
      o.prev_y = coin(rng, 0.3) ? o.y : o.y - std::round(uniform(rng, -4.0, 4.0));
      o.rgb = cat.rgb;
      o.hud = cat.hud;
      if (cat.has_value) {
        o.value = uniform_int(rng, 0, 64);
        o.prev_value = coin(rng) ? *o.value : uniform_int(rng, 0, 64);
      }
      s.objects.push_back(std::move(o));
    }
  }
  std::shuffle(s.objects.begin(), s.objects.end(), rng);
  return s;
}

// ---------------------------------------------------------------------------
// Random programs. Source text is generated directly, with types tracked so
// that every program typechecks; it is then parsed like any other program.

class ProgramGen {
 public:
  explicit ProgramGen(Rng& rng, int max_depth = 8) : rng_(rng), max_depth_(max_depth) {}

  std::string program() {
    helpers_.clear();
    std::string out;
    int nh = uniform_int(rng_, 0, 2);
    for (int i = 0; i < nh; ++i) {
      Helper h;
      h.name = "helper" + std::to_string(i);
      int np = uniform_int(rng_, 1, 3);
      Scope scope;
      std::string sig;
      for (int p = 0; p < np; ++p) {
        // The first parameter is always a list so leaves have objects to use.
        dsl::Type t = p == 0 ? dsl::Type::kObjList
                             : pick({dsl::Type::kFloat, dsl::Type::kObj, dsl::Type::kObjList, dsl::Type::kInt});
        h.params.push_back(t);
        std::string pn = "p" + std::to_string(p);
        scope.push_back({pn, t});
        if (p) sig += ", ";
        sig += pn + ": " + dsl::type_name(t);
      }
      h.result = pick({dsl::Type::kFloat, dsl::Type::kBool});
      std::string body = gen(h.result, max_depth_ - 2, scope);
      out += "def " + h.name + "(" + sig + ") -> " + dsl::type_name(h.result) + ":\n  " + body + "\n\n";
      helpers_.push_back(std::move(h));
    }
    Scope top = {{"objects", dsl::Type::kObjList}};
    std::string entry = gen(dsl::Type::kFloat, max_depth_, top);
    if (coin(rng_, 0.3)) entry = "clamp(" + entry + ", -1.0, 1.0)";
    out += "reward(objects):\n  " + entry + "\n";
    return out;
  }

 private:
  struct Helper {
    std::string name;
    std::vector<dsl::Type> params;
    dsl::Type result;
  };
  using Scope = std::vector<std::pair<std::string, dsl::Type>>;

  Rng& rng_;
  int max_depth_;
  int fresh_ = 0;
  std::vector<Helper> helpers_;

  dsl::Type pick(std::initializer_list<dsl::Type> ts) {
    auto it = ts.begin();
    std::advance(it, uniform_int(rng_, 0, static_cast<int>(ts.size()) - 1));
    return *it;
  }

  std::string fresh() { return "v" + std::to_string(fresh_++); }

  std::string var_of(dsl::Type t, const Scope& scope) {
    std::vector<std::string> names;
    for (const auto& [n, ty] : scope) {
      if (ty == t) names.push_back(n);
    }
    if (names.empty()) return {};
    return names[static_cast<std::size_t>(uniform_int(rng_, 0, static_cast<int>(names.size()) - 1))];
  }

  std::string float_lit() {
    static const char* lits[] = {"0.0", "0.5", "1.0", "-1.0", "2.5", "0.1", "160.0", "-0.05", "20.0"};
    return lits[uniform_int(rng_, 0, 8)];
  }

  std::string leaf(dsl::Type t, const Scope& scope) {
    std::string v = var_of(t, scope);
    if (!v.empty() && coin(rng_, 0.6)) return v;
    std::string list = var_of(dsl::Type::kObjList, scope);
    switch (t) {
      case dsl::Type::kFloat: return float_lit();
      case dsl::Type::kInt: return std::to_string(uniform_int(rng_, -3, 30));
      case dsl::Type::kBool: return coin(rng_) ? "true" : "false";
      case dsl::Type::kObjList: return list;
      case dsl::Type::kOptObj: return "first(" + list + ")";
      case dsl::Type::kPair: return "(" + float_lit() + ", " + float_lit() + ")";
      case dsl::Type::kObj: return "unwrap(first(" + list + "))";
      default: return "0.0";
    }
  }

  std::string lambda(int params, dsl::Type body_t, int depth, Scope scope) {
    std::string a = fresh();
    scope.push_back({a, dsl::Type::kObj});
    if (params == 1) return a + " => " + gen(body_t, depth, scope);
    std::string b = fresh();
    scope.push_back({b, dsl::Type::kObj});
    return "(" + a + ", " + b + ") => " + gen(body_t, depth, scope);
  }

  std::string category() {
    static const char* cats[] = {"Chicken", "Car", "Player", "Enemy", "Ball", "Diver", "Flag", "Tree"};
    return std::string("\"") + cats[uniform_int(rng_, 0, 7)] + "\"";
  }

  std::string gen(dsl::Type t, int depth, const Scope& scope) {
    using dsl::Type;
    if (depth <= 1) return leaf(t, scope);
    int d = depth - 1;
    // Binders are available at every type.
    int roll = uniform_int(rng_, 0, 99);
    if (roll < 8) {
      Type bt = pick({Type::kFloat, Type::kObj, Type::kObjList, Type::kInt, Type::kBool});
      std::string n = fresh();
      std::string init = gen(bt, d, scope);
      Scope inner = scope;
      inner.push_back({n, bt});
      return "(let " + n + " = " + init + " in " + gen(t, d, inner) + ")";
    }
    if (roll < 14) {
      return "(if " + gen(Type::kBool, d, scope) + " then " + gen(t, d, scope) +
             " else " + gen(t, d, scope) + ")";
    }
    switch (t) {
      case Type::kFloat: {
        std::vector<Helper*> callable;
        for (auto& h : helpers_) {
          if (h.result == Type::kFloat) callable.push_back(&h);
        }
        switch (uniform_int(rng_, 0, 16)) {
          case 0: return leaf(t, scope);
          case 1: return "(" + gen(t, d, scope) + " + " + gen(t, d, scope) + ")";
          case 2: return "(" + gen(t, d, scope) + " - " + gen(Type::kInt, d, scope) + ")";
          case 3: return "(" + gen(t, d, scope) + " * " + gen(t, d, scope) + ")";
          case 4: return "(" + gen(t, d, scope) + " / " + gen(t, d, scope) + ")";
          case 5: return "-(" + gen(t, d, scope) + ")";
          case 6: {
            static const char* fs[] = {"x", "y", "w", "h", "dx", "dy", "prev_x", "prev_y"};
            return gen(Type::kObj, d, scope) + "." + fs[uniform_int(rng_, 0, 7)];
          }
          case 7: return "clamp(" + gen(t, d, scope) + ", " + gen(t, d, scope) + ", " + gen(t, d, scope) + ")";
          case 8: return std::string(coin(rng_) ? "min(" : "max(") + gen(t, d, scope) + ", " + gen(Type::kInt, d, scope) + ")";
          case 9: return "abs(" + gen(t, d, scope) + ")";
          case 10: return std::string(coin(rng_) ? "center_x(" : "center_y(") + gen(Type::kObj, d, scope) + ")";
          case 11: return "manhattan(" + gen(Type::kObj, d, scope) + ", " + gen(Type::kObj, d, scope) + ")";
          case 12: {
            static const char* folds[] = {"sum_over", "min_over", "max_over"};
            return std::string(folds[uniform_int(rng_, 0, 2)]) + "(" + gen(Type::kObjList, d, scope) +
                   ", " + lambda(1, Type::kFloat, d, scope) + ")";
          }
          case 13: return "sum_pairs(" + gen(Type::kObjList, d, scope) + ", " + lambda(2, Type::kFloat, d, scope) + ")";
          case 14: return std::string(coin(rng_) ? "fst(" : "snd(") + gen(Type::kPair, d, scope) + ")";
          case 15:
            if (!callable.empty()) {
              Helper& h = *callable[static_cast<std::size_t>(uniform_int(rng_, 0, static_cast<int>(callable.size()) - 1))];
              std::string call = h.name + "(";
              for (std::size_t i = 0; i < h.params.size(); ++i) {
                if (i) call += ", ";
                call += gen(h.params[i], d, scope);
              }
              return call + ")";
            }
            return leaf(t, scope);
          default: return gen(Type::kInt, d, scope);
        }
      }
      case Type::kInt:
        switch (uniform_int(rng_, 0, 3)) {
          case 0: return leaf(t, scope);
          case 1: return "count(" + gen(Type::kObjList, d, scope) + ")";
          case 2: return "(" + gen(t, d, scope) + (coin(rng_) ? " + " : " * ") + gen(t, d, scope) + ")";
          default: return gen(Type::kObj, d, scope) + (coin(rng_) ? ".red" : ".blue");
        }
      case Type::kBool:
        switch (uniform_int(rng_, 0, 8)) {
          case 0: return leaf(t, scope);
          case 1: {
            static const char* ops[] = {" < ", " <= ", " > ", " >= ", " == ", " != "};
            return "(" + gen(Type::kFloat, d, scope) + ops[uniform_int(rng_, 0, 5)] + gen(Type::kFloat, d, scope) + ")";
          }
          case 2: return "(" + gen(t, d, scope) + (coin(rng_) ? " and " : " or ") + gen(t, d, scope) + ")";
          case 3: return "not " + gen(t, 1, scope);
          case 4: return std::string(coin(rng_) ? "overlaps(" : "corner_in(") + gen(Type::kObj, d, scope) + ", " + gen(Type::kObj, d, scope) + ")";
          case 5: return std::string(coin(rng_) ? "exists(" : "forall(") + gen(Type::kObjList, d, scope) + ", " + lambda(1, Type::kBool, d, scope) + ")";
          case 6: return "is_some(" + gen(Type::kOptObj, d, scope) + ")";
          case 7: return "(" + gen(Type::kObj, d, scope) + ".category == " + category() + ")";
          default: {
            for (auto& h : helpers_) {
              if (h.result == Type::kBool && coin(rng_)) {
                std::string call = h.name + "(";
                for (std::size_t i = 0; i < h.params.size(); ++i) {
                  if (i) call += ", ";
                  call += gen(h.params[i], d, scope);
                }
                return call + ")";
              }
            }
            return leaf(t, scope);
          }
        }
      case Type::kObj:
        if (std::string v = var_of(t, scope); !v.empty() && coin(rng_, 0.7)) return v;
        return "unwrap(" + gen(Type::kOptObj, d, scope) + ")";
      case Type::kOptObj:
        switch (uniform_int(rng_, 0, 2)) {
          case 0: return "first(" + gen(Type::kObjList, d, scope) + ")";
          case 1: return "last(" + gen(Type::kObjList, d, scope) + ")";
          default: return "nearest(" + gen(Type::kObj, d, scope) + ", " + gen(Type::kObjList, d, scope) + ")";
        }
      case Type::kObjList:
        switch (uniform_int(rng_, 0, 4)) {
          case 0: return leaf(t, scope);
          case 1: return "filter_category(" + gen(t, d, scope) + ", " + category() + ")";
          case 2: return "filter(" + gen(t, d, scope) + ", " + lambda(1, Type::kBool, d, scope) + ")";
          case 3: return "concat(" + gen(t, d, scope) + ", " + gen(t, d, scope) + ")";
          default:
            return "sort_by(" + gen(t, d, scope) + ", " +
                   lambda(1, coin(rng_) ? Type::kFloat : Type::kPair, d, scope) + ")";
        }
      case Type::kPair:
        if (coin(rng_)) return "center(" + gen(Type::kObj, d, scope) + ")";
        return "(" + gen(Type::kFloat, d, scope) + ", " + gen(Type::kFloat, d, scope) + ")";
      default: return leaf(t, scope);
    }
  }
};

inline std::string random_program(Rng& rng, int max_depth = 8) {
  ProgramGen g(rng, max_depth);
  return g.program();
}

}  // namespace relreward::fuzz

#endif  // RELREWARD_FUZZ_HPP_
