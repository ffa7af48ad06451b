#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ewave/duhamel.hpp"
#include "ewave/errors.hpp"

namespace ewave {

// ---------------------------------------------------------------------------
// Forms
// ---------------------------------------------------------------------------

NonlinearityForm NonlinearityForm::grad_grad2() {
  NonlinearityForm f;
  f.kind = NonlinearityKind::grad_grad2;
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) f.terms.push_back({k, a, b, a, b, k, false, 1.0});
  return f;
}

NonlinearityForm NonlinearityForm::grad_gradt() {
  NonlinearityForm f;
  f.kind = NonlinearityKind::grad_gradt;
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) f.terms.push_back({k, a, b, b, 0, k, true, 1.0});
  return f;
}

NonlinearityForm NonlinearityForm::custom(std::vector<BilinearTerm> terms) {
  NonlinearityForm f;
  f.kind = NonlinearityKind::custom;
  f.terms = std::move(terms);
  f.validate();
  return f;
}

NonlinearityForm NonlinearityForm::none() { return custom({}); }

bool NonlinearityForm::uses_time_derivative() const {
  return std::any_of(terms.begin(), terms.end(), [](const BilinearTerm& t) { return t.time; });
}

void NonlinearityForm::validate() const {
  auto in_range = [](int v) { return v >= 0 && v < 3; };
  for (const auto& t : terms) {
    if (!in_range(t.k) || !in_range(t.a) || !in_range(t.j) || !in_range(t.b) || !in_range(t.m) ||
        (!t.time && !in_range(t.c))) {
      throw std::invalid_argument("nonlinearity: term index out of range (expected 0..2)");
    }
    if (!std::isfinite(t.coef)) throw std::invalid_argument("nonlinearity: term coefficient must be finite");
  }
}

const char* to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::grad_grad2: return "grad_grad2";
    case NonlinearityKind::grad_gradt: return "grad_gradt";
    case NonlinearityKind::custom: return "custom";
  }
  return "";
}

NonlinearityForm nonlinearity_from_string(const std::string& name) {
  if (name == "grad_grad2") return NonlinearityForm::grad_grad2();
  if (name == "grad_gradt") return NonlinearityForm::grad_gradt();
  if (name == "none" || name == "linear") return NonlinearityForm::none();
  if (name == "custom") throw std::invalid_argument("nonlinearity: custom form needs explicit terms");
  throw std::invalid_argument("unknown nonlinearity form '" + name + "'");
}

std::vector<BilinearTerm> parse_terms(const std::string& spec) {
  std::vector<BilinearTerm> out;
  std::stringstream all(spec);
  std::string item;
  while (std::getline(all, item, ';')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ss(item);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 7) {
      throw std::invalid_argument("nonlinearity term '" + item + "': expected k:a:j:b:c:m:coef");
    }
    BilinearTerm t;
    try {
      t.k = std::stoi(parts[0]);
      t.a = std::stoi(parts[1]);
      t.j = std::stoi(parts[2]);
      t.b = std::stoi(parts[3]);
      t.time = parts[4] == "t";
      t.c = t.time ? 0 : std::stoi(parts[4]);
      t.m = std::stoi(parts[5]);
      t.coef = std::stod(parts[6]);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("nonlinearity term '" + item + "': malformed number");
    }
    out.push_back(t);
  }
  NonlinearityForm::custom(out);  // range check
  return out;
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

NonlinearEvaluator::NonlinearEvaluator(const FrequencyLattice& lattice, NonlinearityForm form)
    : lattice_(lattice), form_(std::move(form)) {
  form_.validate();
  auto find_or_add = [](std::vector<Factor>& list, Factor f) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& g = list[i];
      if (g.axis1 == f.axis1 && g.axis2 == f.axis2 && g.comp == f.comp && g.time == f.time) return static_cast<int>(i);
    }
    list.push_back(f);
    return static_cast<int>(list.size() - 1);
  };
  std::vector<std::pair<int, int>> index_pairs;
  for (const auto& t : form_.terms) {
    const int fi = find_or_add(first_, {t.a, -1, t.j, false});
    Factor s = t.time ? Factor{t.b, -1, t.m, true} : Factor{std::min(t.b, t.c), std::max(t.b, t.c), t.m, false};
    const int si = find_or_add(second_, s);
    index_pairs.push_back({fi, si});
  }
  terms_by_second_.resize(second_.size());
  for (std::size_t i = 0; i < form_.terms.size(); ++i) {
    terms_by_second_[index_pairs[i].second].push_back({index_pairs[i].first, &form_.terms[i]});
  }

  const int n = lattice_.n();
  keep_.resize(n);
  for (int m = 0; m < n; ++m) keep_[m] = 3 * std::abs(lattice_.wavenumber(m)) < n ? 1 : 0;
}

void NonlinearEvaluator::transform_pair(const VectorField& u_hat, const VectorField& ut_hat, const Factor* f,
                                        const Factor* g) {
  const int n = lattice_.n();
  const auto xi = lattice_.axis_frequencies();
  scratch_.resize(lattice_.size());
  auto source = [&](const Factor* h) { return (h->time ? ut_hat : u_hat).component(h->comp).data(); };
  const Complex* sf = source(f);
  const Complex* sg = g ? source(g) : nullptr;
  // (i xi)^alpha for one or two axes.
  auto multiplier = [&](const Factor* h, const double x[3]) -> Complex {
    if (h->axis2 < 0) return {0.0, x[h->axis1]};
    return {-x[h->axis1] * x[h->axis2], 0.0};
  };
  std::size_t idx = 0;
  for (int mk = 0; mk < n; ++mk) {
    for (int mj = 0; mj < n; ++mj) {
      const bool row = keep_[mj] && keep_[mk];
      for (int mi = 0; mi < n; ++mi, ++idx) {
        if (!row || !keep_[mi]) {
          scratch_[idx] = 0.0;
          continue;
        }
        const double x[3] = {xi[mi], xi[mj], xi[mk]};
        Complex v = multiplier(f, x) * sf[idx];
        if (g) v += Complex(0.0, 1.0) * multiplier(g, x) * sg[idx];
        scratch_[idx] = v;
      }
    }
  }
  lattice_.inverse(scratch_);
}

NonlinearityResult NonlinearEvaluator::operator()(const VectorField& u_hat, const VectorField& ut_hat) {
  if (!u_hat.is_spectral() || !ut_hat.is_spectral()) {
    throw RepresentationError("eval_nonlinearity: state fields must be spectral");
  }
  if (!(u_hat.lattice() == lattice_) || !(ut_hat.lattice() == lattice_)) {
    throw LatticeMismatch("eval_nonlinearity: state lattice differs from the evaluator lattice");
  }
  const std::size_t N = lattice_.size();
  const int n = lattice_.n();
  NonlinearityResult res{VectorField(lattice_, Representation::spectral)};

  {
    double total = 0.0, cut = 0.0;
    std::size_t idx = 0;
    for (int mk = 0; mk < n; ++mk)
      for (int mj = 0; mj < n; ++mj)
        for (int mi = 0; mi < n; ++mi, ++idx) {
          double e = 0.0;
          for (int c = 0; c < 3; ++c) e += std::norm(u_hat.at(c, idx));
          total += e;
          if (!(keep_[mi] && keep_[mj] && keep_[mk])) cut += e;
        }
    res.input_truncation = total > 0.0 ? cut / total : 0.0;
  }
  if (form_.terms.empty()) return res;

  first_values_.resize(first_.size());
  for (std::size_t i = 0; i < first_.size(); i += 2) {
    const bool has_pair = i + 1 < first_.size();
    transform_pair(u_hat, ut_hat, &first_[i], has_pair ? &first_[i + 1] : nullptr);
    first_values_[i].resize(N);
    for (std::size_t x = 0; x < N; ++x) first_values_[i][x] = scratch_[x].real();
    if (has_pair) {
      first_values_[i + 1].resize(N);
      for (std::size_t x = 0; x < N; ++x) first_values_[i + 1][x] = scratch_[x].imag();
    }
  }

  for (auto& a : acc_) a.assign(N, 0.0);
  second_a_.resize(N);
  second_b_.resize(N);
  auto accumulate = [&](std::size_t s, const RealBuffer& values) {
    for (const auto& [fi, term] : terms_by_second_[s]) {
      double* out = acc_[term->k].data();
      const double* p = first_values_[fi].data();
      const double* q = values.data();
      const double coef = term->coef;
      for (std::size_t x = 0; x < N; ++x) out[x] += coef * p[x] * q[x];
    }
  };
  for (std::size_t s = 0; s < second_.size(); s += 2) {
    const bool has_pair = s + 1 < second_.size();
    transform_pair(u_hat, ut_hat, &second_[s], has_pair ? &second_[s + 1] : nullptr);
    for (std::size_t x = 0; x < N; ++x) second_a_[x] = scratch_[x].real();
    if (has_pair) {
      for (std::size_t x = 0; x < N; ++x) second_b_[x] = scratch_[x].imag();
    }
    accumulate(s, second_a_);
    if (has_pair) accumulate(s + 1, second_b_);
  }

  // Components 0 and 1 share one complex transform; component 2 goes alone.
  for (std::size_t x = 0; x < N; ++x) scratch_[x] = Complex(acc_[0][x], acc_[1][x]);
  lattice_.forward(scratch_);
  auto F0 = res.F.component(0);
  auto F1 = res.F.component(1);
  for (std::size_t idx = 0; idx < N; ++idx) {
    const Complex z = scratch_[idx];
    const Complex zm = std::conj(scratch_[lattice_.mirror(idx)]);
    F0[idx] = 0.5 * (z + zm);
    F1[idx] = Complex(0.0, -0.5) * (z - zm);
  }
  for (std::size_t x = 0; x < N; ++x) scratch_[x] = Complex(acc_[2][x], 0.0);
  lattice_.forward(scratch_);
  auto F2 = res.F.component(2);
  std::copy(scratch_.begin(), scratch_.end(), F2.begin());

  double total = 0.0, cut = 0.0;
  std::size_t idx = 0;
  for (int mk = 0; mk < n; ++mk)
    for (int mj = 0; mj < n; ++mj)
      for (int mi = 0; mi < n; ++mi, ++idx) {
        const bool keep = keep_[mi] && keep_[mj] && keep_[mk];
        for (int c = 0; c < 3; ++c) {
          Complex& v = res.F.at(c, idx);
          const double e = std::norm(v);
          total += e;
          if (!keep) {
            cut += e;
            v = 0.0;
          }
        }
      }
  res.output_truncation = total > 0.0 ? cut / total : 0.0;
  return res;
}

NonlinearityResult eval_nonlinearity_detailed(const NonlinearityForm& form, const SolverState& state) {
  NonlinearEvaluator eval(state.u_hat.lattice(), form);
  return eval(state.u_hat, state.ut_hat);
}

VectorField eval_nonlinearity(const NonlinearityForm& form, const SolverState& state) {
  return eval_nonlinearity_detailed(form, state).F;
}

}  // namespace ewave
