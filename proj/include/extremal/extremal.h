/* C interface to the extremality toolkit. All handles are opaque; every call
   returns an exl_status and never throws. Strings returned by the library are
   owned by the handle they came from. */
#ifndef EXTREMAL_EXTREMAL_H
#define EXTREMAL_EXTREMAL_H

#include <stddef.h>

#if defined(EXL_BUILDING_LIBRARY)
#define EXL_API __attribute__((visibility("default")))
#else
#define EXL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum exl_status {
  EXL_OK = 0,
  EXL_INVALID_ARGUMENT = 1,
  EXL_DIMENSION_MISMATCH = 2,
  EXL_DEPENDENT = 3,
  EXL_CERTIFICATION = 4,
  EXL_PRECISION = 5,
  EXL_UNRESOLVED = 6,
  EXL_INTERNAL = 7,
  EXL_VIOLATION = 8 /* run completed and found a criterion violation */
} exl_status;

typedef struct exl_context exl_context;
typedef struct exl_result exl_result;
typedef struct exl_multivector exl_multivector;

EXL_API exl_status exl_context_create(exl_context** out);
EXL_API void exl_context_destroy(exl_context* ctx);
/* Message of the last failed call on this context ("" if none). */
EXL_API const char* exl_last_error(const exl_context* ctx);
EXL_API const char* exl_status_name(exl_status status);

/* Runs one experiment described by a JSON config
   {"command", "params", "seed", "format", "precision", "workers"}.
   On EXL_OK or EXL_VIOLATION *out holds the result. */
EXL_API exl_status exl_run(exl_context* ctx, const char* config_json, exl_result** out);
EXL_API exl_status exl_selftest(exl_context* ctx, int reduced, int mutate_shuffle_sign, exl_result** out);
/* Parameter documentation for one command ("" for unknown commands). */
EXL_API const char* exl_command_help(const char* command);

/* 0 ok, 1 failure, 2 violation. */
EXL_API int exl_result_exit_code(const exl_result* result);
EXL_API const char* exl_result_format(const exl_result* result);
EXL_API const char* exl_result_data(const exl_result* result);
EXL_API size_t exl_result_size(const exl_result* result);
EXL_API void exl_result_destroy(exl_result* result);

/* Wedge of `count` integer vectors of length k (row-major). */
EXL_API exl_status exl_multivector_from_basis(exl_context* ctx, int k, int count, const long long* vectors,
                                              exl_multivector** out);
EXL_API int exl_multivector_grade(const exl_multivector* w);
/* Number of coefficients, C(k, grade). */
EXL_API int exl_multivector_size(const exl_multivector* w);
/* Coefficient `index` in lexicographic subset order, as "num/den" or "num". */
EXL_API const char* exl_multivector_coefficient(const exl_multivector* w, int index);
EXL_API const char* exl_multivector_to_string(const exl_multivector* w);
EXL_API void exl_multivector_destroy(exl_multivector* w);

/* Sup-norm shortest nonzero vector of the lattice spanned by d rational rows of
   length k (entries num/den, row-major). The result is JSON. */
EXL_API exl_status exl_shortest_vector(exl_context* ctx, int d, int k, const long long* num, const long long* den,
                                       long search_bound, exl_result** out);

#ifdef __cplusplus
}
#endif

#endif
