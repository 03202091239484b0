#include "extremal/extremal.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "extremal/experiment.hpp"
#include "extremal/exterior_algebra.hpp"
#include "extremal/lattice.hpp"
#include "extremal/numeric.hpp"

struct exl_context {
  std::string last_error;
};

struct exl_result {
  int exit_code = 0;
  std::string format;
  std::string data;
};

struct exl_multivector {
  extremal::MultiVector w;
  std::vector<std::string> coefficients;
  std::string text;
};

namespace {

exl_status status_of(extremal::ErrorCode code) {
  switch (code) {
    case extremal::ErrorCode::kInvalidArgument: return EXL_INVALID_ARGUMENT;
    case extremal::ErrorCode::kDimensionMismatch: return EXL_DIMENSION_MISMATCH;
    case extremal::ErrorCode::kDependent: return EXL_DEPENDENT;
    case extremal::ErrorCode::kCertification: return EXL_CERTIFICATION;
    case extremal::ErrorCode::kPrecision: return EXL_PRECISION;
    case extremal::ErrorCode::kUnresolved: return EXL_UNRESOLVED;
    case extremal::ErrorCode::kInternal: return EXL_INTERNAL;
  }
  return EXL_INTERNAL;
}

template <class F>
exl_status guarded(exl_context* ctx, F&& body) {
  if (ctx) ctx->last_error.clear();
  try {
    return body();
  } catch (const extremal::Error& e) {
    if (ctx) ctx->last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    if (ctx) ctx->last_error = std::string("invalid JSON: ") + e.what();
    return EXL_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    if (ctx) ctx->last_error = "out of memory";
    return EXL_INTERNAL;
  } catch (const std::exception& e) {
    if (ctx) ctx->last_error = e.what();
    return EXL_INTERNAL;
  }
}

exl_status finish_run(const extremal::RunResult& r, exl_result** out) {
  auto* res = new exl_result{r.exit_code, r.format, r.data};
  *out = res;
  if (r.exit_code == extremal::kExitViolation) return EXL_VIOLATION;
  return EXL_OK;
}

}  // namespace

extern "C" {

exl_status exl_context_create(exl_context** out) {
  if (!out) return EXL_INVALID_ARGUMENT;
  *out = new (std::nothrow) exl_context();
  return *out ? EXL_OK : EXL_INTERNAL;
}

void exl_context_destroy(exl_context* ctx) { delete ctx; }

const char* exl_last_error(const exl_context* ctx) { return ctx ? ctx->last_error.c_str() : "null context"; }

const char* exl_status_name(exl_status status) {
  switch (status) {
    case EXL_OK: return "ok";
    case EXL_INVALID_ARGUMENT: return "invalid argument";
    case EXL_DIMENSION_MISMATCH: return "dimension mismatch";
    case EXL_DEPENDENT: return "dependent";
    case EXL_CERTIFICATION: return "certification failed";
    case EXL_PRECISION: return "insufficient precision";
    case EXL_UNRESOLVED: return "unresolved";
    case EXL_INTERNAL: return "internal error";
    case EXL_VIOLATION: return "violation found";
  }
  return "unknown status";
}

exl_status exl_run(exl_context* ctx, const char* config_json, exl_result** out) {
  if (!ctx || !config_json || !out) return EXL_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded(ctx, [&] {
    return finish_run(extremal::run_experiment(nlohmann::json::parse(config_json)), out);
  });
}

exl_status exl_selftest(exl_context* ctx, int reduced, int mutate_shuffle_sign, exl_result** out) {
  if (!ctx || !out) return EXL_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded(ctx, [&] {
    nlohmann::json config = {{"command", "selftest"},
                             {"params",
                              {{"reduced", reduced != 0}, {"mutate", mutate_shuffle_sign ? "shuffle-sign" : "none"}}}};
    return finish_run(extremal::run_experiment(config), out);
  });
}

const char* exl_command_help(const char* command) {
  static thread_local std::string text;
  text = command ? extremal::command_help(command) : std::string();
  return text.c_str();
}

int exl_result_exit_code(const exl_result* result) { return result ? result->exit_code : 1; }
const char* exl_result_format(const exl_result* result) { return result ? result->format.c_str() : ""; }
const char* exl_result_data(const exl_result* result) { return result ? result->data.c_str() : ""; }
size_t exl_result_size(const exl_result* result) { return result ? result->data.size() : 0; }
void exl_result_destroy(exl_result* result) { delete result; }

exl_status exl_multivector_from_basis(exl_context* ctx, int k, int count, const long long* vectors,
                                      exl_multivector** out) {
  if (!ctx || !vectors || !out || k < 1 || k > 16 || count < 1 || count > k) return EXL_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded(ctx, [&] {
    std::vector<extremal::IntVector> basis(count);
    for (int r = 0; r < count; ++r) {
      for (int c = 0; c < k; ++c) basis[r].emplace_back(vectors[static_cast<size_t>(r) * k + c]);
    }
    auto* mv = new exl_multivector();
    mv->w = extremal::MultiVector::from_vector(basis[0]);
    for (int r = 1; r < count; ++r) mv->w = extremal::wedge(mv->w, extremal::MultiVector::from_vector(basis[r]));
    for (const auto& c : mv->w.dense()) mv->coefficients.push_back(extremal::to_string(c));
    mv->text = mv->w.to_string();
    *out = mv;
    return EXL_OK;
  });
}

int exl_multivector_grade(const exl_multivector* w) { return w ? w->w.grade() : -1; }
int exl_multivector_size(const exl_multivector* w) { return w ? static_cast<int>(w->coefficients.size()) : 0; }
const char* exl_multivector_coefficient(const exl_multivector* w, int index) {
  if (!w || index < 0 || index >= static_cast<int>(w->coefficients.size())) return nullptr;
  return w->coefficients[index].c_str();
}
const char* exl_multivector_to_string(const exl_multivector* w) { return w ? w->text.c_str() : ""; }
void exl_multivector_destroy(exl_multivector* w) { delete w; }

exl_status exl_shortest_vector(exl_context* ctx, int d, int k, const long long* num, const long long* den,
                               long search_bound, exl_result** out) {
  if (!ctx || !num || !out || d < 1 || k < d || search_bound < 1) return EXL_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded(ctx, [&] {
    std::vector<extremal::RationalVector> rows(d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < k; ++c) {
        const size_t i = static_cast<size_t>(r) * k + c;
        const long long q = den ? den[i] : 1;
        extremal::require(q != 0, extremal::ErrorCode::kInvalidArgument, "shortest_vector: zero denominator");
        rows[r].emplace_back(extremal::Rational(extremal::BigInt(num[i]), extremal::BigInt(q)));
      }
    }
    extremal::ShortestVector sv = extremal::shortest_vector(rows, search_bound);
    nlohmann::json j;
    j["norm"] = extremal::to_string(sv.norm);
    j["exact"] = sv.exact;
    nlohmann::json coeffs = nlohmann::json::array(), vec = nlohmann::json::array();
    for (const auto& c : sv.coefficients) coeffs.push_back(extremal::to_string(c));
    for (const auto& c : sv.vector) vec.push_back(extremal::to_string(c));
    j["coefficients"] = coeffs;
    j["vector"] = vec;
    j["candidates"] = sv.candidates;
    *out = new exl_result{0, "json", j.dump()};
    return EXL_OK;
  });
}

}  // extern "C"
