#ifndef CERTIFEM_H
#define CERTIFEM_H

#include <stddef.h>
#include <stdint.h>

#if defined(CERTIFEM_BUILDING)
#define CERTIFEM_API __attribute__((visibility("default")))
#else
#define CERTIFEM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum certifem_status {
  CERTIFEM_OK = 0,
  CERTIFEM_E_INVALID_ARGUMENT = 1,
  CERTIFEM_E_PARSE = 2,
  CERTIFEM_E_IO = 3,
  CERTIFEM_E_DEGENERATE_SIMPLEX = 4,
  CERTIFEM_E_NON_CONFORMING = 5,
  CERTIFEM_E_INVERTED_ELEMENT = 6,
  CERTIFEM_E_INVALID_POLYGON = 7,
  CERTIFEM_E_INVALID_DIRECTION = 8,
  CERTIFEM_E_NOT_INSCRIBED = 9,
  CERTIFEM_E_STRATEGY_INAPPLICABLE = 10,
  CERTIFEM_E_MISSING_NORM_METADATA = 11,
  CERTIFEM_E_NOT_NONBLUNT = 12,
  CERTIFEM_E_NEGATIVE_RADICAND = 13,
  CERTIFEM_E_CONSTRAINT_RANK_DEFICIENCY = 14,
  CERTIFEM_E_MAX_ITER_EXCEEDED = 15,
  CERTIFEM_E_BOUND_VIOLATED = 16,
  CERTIFEM_E_INVALID_SOURCE_TERM = 17,
  CERTIFEM_E_INTERNAL = 99
} certifem_status;

typedef struct certifem_domain certifem_domain;
typedef struct certifem_poly certifem_poly;
typedef struct certifem_mesh certifem_mesh;

/* Message of the last failed call on this thread; never NULL. */
CERTIFEM_API const char* certifem_last_error(void);
CERTIFEM_API const char* certifem_status_name(certifem_status status);
/* Frees strings returned through char** out-parameters. */
CERTIFEM_API void certifem_string_free(char* s);

/* Domains: "disk:R", "ball:R", "square", "polygon:<file.json>". */
CERTIFEM_API certifem_status certifem_domain_from_spec(const char* spec, certifem_domain** out);
/* Domain of a registered exact solution (disk2d, ball3d, square2d). */
CERTIFEM_API certifem_status certifem_domain_of_exact(const char* exact_name, certifem_domain** out);
CERTIFEM_API certifem_status certifem_domain_info(const certifem_domain* domain, int* dim,
                                                  double* diameter, double* measure);
CERTIFEM_API void certifem_domain_free(certifem_domain* domain);

/* Inscribed polytopes. */
CERTIFEM_API certifem_status certifem_poly_regular(const certifem_domain* disk, int m,
                                                   certifem_poly** out);
CERTIFEM_API certifem_status certifem_poly_exact(const certifem_domain* polygon, certifem_poly** out);
CERTIFEM_API certifem_status certifem_poly_load(const char* path, certifem_poly** out);
CERTIFEM_API certifem_status certifem_poly_save(const certifem_poly* poly, const char* path);
CERTIFEM_API void certifem_poly_free(certifem_poly* poly);
CERTIFEM_API certifem_status certifem_gap(const certifem_domain* domain, const certifem_poly* poly,
                                          double* delta);

/* Meshes. format is "json" or "node_ele"; NULL guesses from the path. */
CERTIFEM_API certifem_status certifem_mesh_fan(const certifem_poly* polygon, int levels,
                                               certifem_mesh** out);
CERTIFEM_API certifem_status certifem_mesh_rectangle(int nx, int ny, double x0, double y0,
                                                     double x1, double y1, certifem_mesh** out);
CERTIFEM_API certifem_status certifem_mesh_load(const char* path, const char* format,
                                                certifem_mesh** out);
CERTIFEM_API certifem_status certifem_mesh_save(const certifem_mesh* mesh, const char* path,
                                                const char* format);
CERTIFEM_API certifem_status certifem_mesh_counts(const certifem_mesh* mesh, size_t* nodes,
                                                  size_t* elements);
CERTIFEM_API certifem_status certifem_mesh_quality_json(const certifem_mesh* mesh, char** json);
CERTIFEM_API void certifem_mesh_free(certifem_mesh* mesh);

/* Certified L2 bound. source: "const:c", "sinsin", "poly:a,b1,..,bn,q";
   fh_mode: barycentric|nodal|exact; strategy: elementwise|circumradius|
   minangle|nonblunt|regularity; rho: radius|diameter or NULL. */
CERTIFEM_API certifem_status certifem_certify(const certifem_domain* domain,
                                              const certifem_poly* poly,
                                              const certifem_mesh* mesh, const char* source,
                                              const char* fh_mode, const char* strategy,
                                              const char* rho, double* total, char** json);
CERTIFEM_API certifem_status certifem_closed_form(const certifem_domain* domain,
                                                  const certifem_poly* poly,
                                                  const certifem_mesh* mesh, const char* source,
                                                  double* value);

/* Error against a registered exact solution on a given mesh. bound_holds is
   set to 1 when actual <= certified. */
CERTIFEM_API certifem_status certifem_verify_mesh(const char* exact_name, const certifem_poly* poly,
                                                  const certifem_mesh* mesh, const char* fh_mode,
                                                  const char* strategy, const char* rho,
                                                  int* bound_holds, char** json);
/* Refinement study with built-in meshes. */
CERTIFEM_API certifem_status certifem_verify_convergence(const char* exact_name, int levels,
                                                         double* slope, int* bounds_hold,
                                                         char** json);
CERTIFEM_API certifem_status certifem_barrier_check(const char* exact_name,
                                                    const certifem_poly* poly, uint64_t seed,
                                                    size_t samples, int* passed, char** json);
CERTIFEM_API certifem_status certifem_gap_error_term(int m, double* value);

/* Disk pipeline rows. refine < 0 selects the default rule per m;
   fixture_dir may be NULL. all_valid is 1 when every row has actual below
   both predicted and certified. */
CERTIFEM_API certifem_status certifem_table1(const int* ms, size_t count, int refine,
                                             const char* fixture_dir, int* all_valid, char** csv,
                                             char** json);

#ifdef __cplusplus
}
#endif

#endif /* CERTIFEM_H */
