/* C interface to the selfix mesh-repair library.
 *
 * Every function returns a selfix_status. On failure selfix_last_error()
 * holds a message for the calling thread. Handles are opaque and released
 * with the matching *_free function; strings returned through char** are
 * released with selfix_string_free. */
#ifndef SELFIX_H
#define SELFIX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SELFIX_API __declspec(dllexport)
#else
#define SELFIX_API __attribute__((visibility("default")))
#endif

typedef enum selfix_status {
  SELFIX_OK = 0,
  SELFIX_INVALID_ARGUMENT,
  SELFIX_DEGENERATE_TRIANGLE,
  SELFIX_DEGENERATE_FACE,
  SELFIX_NOT_CLOSED,
  SELFIX_NOT_INJECTIVE,
  SELFIX_PRECONDITION_VIOLATED,
  SELFIX_NON_ORIENTABLE,
  SELFIX_NOT_A_SURFACE,
  SELFIX_NEGATIVE_DEFICIT,
  SELFIX_EXHAUSTED,
  SELFIX_NON_TRIANGULAR_CELL,
  SELFIX_STILL_INTERSECTING,
  SELFIX_NOT_ORTHOGONAL,
  SELFIX_NOT_INVARIANT,
  SELFIX_NOT_A_GROUP,
  SELFIX_MISSING_REP,
  SELFIX_OPEN_BOUNDARY,
  SELFIX_ISOLATED_NONMANIFOLD_EDGE,
  SELFIX_NEW_INTERSECTION_INTRODUCED,
  SELFIX_PARSE_ERROR,
  SELFIX_IO_ERROR,
  SELFIX_NULL_ARGUMENT,
  SELFIX_INTERNAL_ERROR
} selfix_status;

typedef struct selfix_mesh selfix_mesh;
typedef struct selfix_group selfix_group;
typedef struct selfix_intersections selfix_intersections;
typedef struct selfix_chambers selfix_chambers;

SELFIX_API const char* selfix_version(void);
SELFIX_API const char* selfix_last_error(void);
SELFIX_API const char* selfix_status_name(int status);
SELFIX_API void selfix_string_free(char* s);

/* Meshes. eps_point <= 0 selects 1e-9 x bounding-box diagonal. */
SELFIX_API int selfix_mesh_load(const char* path, double eps_point, selfix_mesh** out);
/* Triangle soup or indexed triangles; coincident points are welded. */
SELFIX_API int selfix_mesh_from_arrays(const double* xyz, size_t vertex_count, const uint32_t* triangles,
                                       size_t triangle_count, double eps_point, selfix_mesh** out);
SELFIX_API int selfix_mesh_fixture(const char* name, selfix_mesh** out);
/* Newline-separated fixture names. */
SELFIX_API int selfix_fixture_names(char** out);
SELFIX_API void selfix_mesh_free(selfix_mesh* m);

SELFIX_API int selfix_mesh_counts(const selfix_mesh* m, size_t* vertices, size_t* edges, size_t* faces,
                                  long* euler);
/* xyz needs 3 x vertices doubles, triangles 3 x faces entries (sorted triples). */
SELFIX_API int selfix_mesh_vertices(const selfix_mesh* m, double* xyz);
SELFIX_API int selfix_mesh_faces(const selfix_mesh* m, uint32_t* triangles);
SELFIX_API int selfix_mesh_eps_point(const selfix_mesh* m, double* eps_point);
/* nonmanifold_vertices is only counted when no non-manifold edge exists. */
SELFIX_API int selfix_mesh_inventory(const selfix_mesh* m, size_t* nonmanifold_edges,
                                     size_t* nonmanifold_vertices, int* is_surface);
/* format: "stl-binary", "stl-ascii" or "off". */
SELFIX_API int selfix_mesh_save(const selfix_mesh* m, const char* path, const char* format);

/* Symmetry groups: one orthogonal matrix per line, 9 reals row-major. */
SELFIX_API int selfix_group_load(const char* path, selfix_group** out);
/* "identity", "cyclic:N", "dihedral:N", "icosahedral". */
SELFIX_API int selfix_group_named(const char* name, selfix_group** out);
SELFIX_API void selfix_group_free(selfix_group* g);
SELFIX_API int selfix_group_order(const selfix_group* g, size_t* order);
SELFIX_API int selfix_group_save(const selfix_group* g, const char* path);
SELFIX_API int selfix_group_verify(const selfix_mesh* m, const selfix_group* g, size_t* face_orbits,
                                   size_t* pair_representatives);

/* Intersections. group may be NULL. */
SELFIX_API int selfix_intersect(const selfix_mesh* m, const selfix_group* g, unsigned jobs,
                                selfix_intersections** out);
SELFIX_API void selfix_intersections_free(selfix_intersections* s);
SELFIX_API int selfix_intersections_counts(const selfix_intersections* s, size_t* segments, size_t* touches,
                                           size_t* coplanar_pairs, size_t* pair_tests);
/* Copies segment i as face_a, face_b and 6 coordinates. */
SELFIX_API int selfix_intersections_segment(const selfix_intersections* s, size_t i, uint32_t faces[2],
                                            double points[6]);

/* Pipeline stages. config_json may be NULL (defaults) and uses the keys
 * eps_point, eps_split, jobs, strict_recheck, seed, magnitude, format. */
SELFIX_API int selfix_resolve(const selfix_mesh* m, const selfix_group* g, const char* config_json,
                              selfix_mesh** out);
SELFIX_API int selfix_repair(const selfix_mesh* m, const selfix_group* g, const char* config_json,
                             selfix_mesh** out, char** report_json);
SELFIX_API int selfix_outer_hull(const selfix_mesh* m, uint64_t seed, selfix_mesh** out);
/* eps <= 0 selects 1e-4 x bounding-box diagonal. */
SELFIX_API int selfix_fix_nonmanifold(const selfix_mesh* m, double eps, uint64_t seed, unsigned jobs,
                                      selfix_mesh** out, char** report_text);
SELFIX_API int selfix_initial_face(const selfix_mesh* m, uint64_t seed, uint32_t* face, double normal[3]);

/* Chambers of an intersection-free complex. Id 0 is the unbounded chamber. */
SELFIX_API int selfix_chambers_compute(const selfix_mesh* m, uint64_t seed, selfix_chambers** out);
SELFIX_API void selfix_chambers_free(selfix_chambers* c);
SELFIX_API int selfix_chambers_bounded(const selfix_chambers* c, size_t* count);
SELFIX_API int selfix_chamber_info(const selfix_chambers* c, uint32_t id, double* volume, long* euler,
                                   double centroid[3], size_t* vertices, size_t* faces);
SELFIX_API int selfix_chambers_locate(const selfix_chambers* c, const double point[3], uint32_t* id);
/* Writes chamber_<id>.<ext> into dir and returns the manifest text. */
SELFIX_API int selfix_explode(const selfix_chambers* c, double magnitude, const char* dir, const char* format,
                              char** manifest);

/* Plain versus symmetric timing; returns one JSON object. */
SELFIX_API int selfix_bench(const selfix_mesh* m, const selfix_group* g, const char* name, int repetitions,
                            unsigned jobs, char** json);

#ifdef __cplusplus
}
#endif

#endif
