#pragma once

#include <cstdint>
#include <string>

#include "sectorpass/fem.hpp"
#include "sectorpass/mesh.hpp"

namespace sectorpass {

// id,x,y,boundary
void write_mesh_nodes_csv(const TriMesh& mesh, const std::string& path);
// n0,n1,n2,parity
void write_mesh_triangles_csv(const TriMesh& mesh, const std::string& path);
// node,value
void write_field_csv(const Field& u, const std::string& path);
// legacy ASCII VTK unstructured grid with the field as point data
void write_field_vtk(const Field& u, const std::string& path, const std::string& name = "u");
// P6 heatmap: red positive, blue negative, white |u| <= eps; pixels outside
// the mesh are white
void write_sign_heatmap_ppm(const Field& u, const std::string& path, double eps, int size = 512);

std::uint64_t fnv1a64_file(const std::string& path);
std::string fnv1a64_hex(const std::string& path);

}  // namespace sectorpass
