#include "sispec/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace sispec {

namespace {

struct LineReader {
  std::ifstream in;
  std::string path;
  long line_no = 0;

  explicit LineReader(const std::filesystem::path& p)
      : in(p), path(p.string()) {
    if (!in) throw IoError("cannot open " + path);
  }

  // Next non-empty line with comments stripped; returns false on EOF.
  bool next(std::string& out, char comment = '#') {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      const auto pos = raw.find(comment);
      if (pos != std::string::npos) raw.erase(pos);
      const auto end = raw.find_last_not_of(" \t\r\n");
      if (end == std::string::npos) continue;
      out = raw.substr(0, end + 1);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path, line_no, what);
  }
};

void check_face(LineReader& r, const std::array<int, 3>& f, int nv) {
  for (int c : f)
    if (c < 0 || c >= nv) r.fail("vertex index out of range");
  if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
    r.fail("face repeats a vertex");
}

TriMesh parse_off(const std::filesystem::path& path) {
  LineReader r(path);
  std::string line;
  if (!r.next(line)) r.fail("empty file");
  if (line != "OFF") r.fail("missing OFF header");
  if (!r.next(line)) r.fail("missing counts line");
  long nv, nf, ne;
  {
    std::istringstream ss(line);
    if (!(ss >> nv >> nf >> ne)) r.fail("bad counts line");
  }
  if (nv < 0 || nf < 0) r.fail("negative counts");

  std::vector<Eigen::Vector3d> verts;
  verts.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!r.next(line)) r.fail("unexpected EOF in vertex list");
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x >> y >> z)) r.fail("bad vertex line");
    verts.emplace_back(x, y, z);
  }
  std::vector<std::array<int, 3>> faces;
  faces.reserve(nf);
  for (long i = 0; i < nf; ++i) {
    if (!r.next(line)) r.fail("unexpected EOF in face list");
    std::istringstream ss(line);
    int count;
    if (!(ss >> count)) r.fail("bad face line");
    if (count != 3) r.fail("only triangle faces are supported");
    std::array<int, 3> f;
    if (!(ss >> f[0] >> f[1] >> f[2])) r.fail("bad face line");
    check_face(r, f, static_cast<int>(nv));
    faces.push_back(f);
  }
  return TriMesh(std::move(verts), std::move(faces));
}

TriMesh parse_ply(const std::filesystem::path& path) {
  LineReader r(path);
  std::string line;
  if (!r.next(line)) r.fail("empty file");
  if (line != "ply") r.fail("missing ply magic");

  long nv = -1, nf = -1;
  int vx = -1, vy = -1, vz = -1;
  int vprops = 0;
  bool in_vertex = false;
  bool seen_format = false;
  while (true) {
    if (!r.next(line)) r.fail("unexpected EOF in header");
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "comment") continue;
    if (tok == "format") {
      std::string kind;
      ss >> kind;
      if (kind != "ascii")
        throw UnsupportedFormat("only ascii PLY is supported: " +
                                path.string());
      seen_format = true;
    } else if (tok == "element") {
      std::string name;
      long count;
      if (!(ss >> name >> count)) r.fail("bad element line");
      in_vertex = (name == "vertex");
      if (name == "vertex")
        nv = count;
      else if (name == "face")
        nf = count;
    } else if (tok == "property") {
      std::string type, name;
      ss >> type;
      if (type == "list") {
        ss >> name >> name;  // skip count/index types
      }
      ss >> name;
      if (in_vertex) {
        if (name == "x") vx = vprops;
        if (name == "y") vy = vprops;
        if (name == "z") vz = vprops;
        ++vprops;
      }
    } else if (tok == "end_header") {
      break;
    }
  }
  if (!seen_format) r.fail("missing format line");
  if (nv < 0 || nf < 0) r.fail("missing vertex or face element");
  if (vx < 0 || vy < 0 || vz < 0) r.fail("vertex element lacks x/y/z");

  std::vector<Eigen::Vector3d> verts;
  verts.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!r.next(line)) r.fail("unexpected EOF in vertex list");
    std::istringstream ss(line);
    std::vector<double> vals(vprops);
    for (int p = 0; p < vprops; ++p)
      if (!(ss >> vals[p])) r.fail("bad vertex line");
    verts.emplace_back(vals[vx], vals[vy], vals[vz]);
  }
  std::vector<std::array<int, 3>> faces;
  faces.reserve(nf);
  for (long i = 0; i < nf; ++i) {
    if (!r.next(line)) r.fail("unexpected EOF in face list");
    std::istringstream ss(line);
    int count;
    if (!(ss >> count)) r.fail("bad face line");
    if (count != 3) r.fail("only triangle faces are supported");
    std::array<int, 3> f;
    if (!(ss >> f[0] >> f[1] >> f[2])) r.fail("bad face line");
    check_face(r, f, static_cast<int>(nv));
    faces.push_back(f);
  }
  return TriMesh(std::move(verts), std::move(faces));
}

TriMesh parse_obj(const std::filesystem::path& path) {
  LineReader r(path);
  std::string line;
  std::vector<Eigen::Vector3d> verts;
  std::vector<std::array<int, 3>> faces;
  while (r.next(line)) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) r.fail("bad vertex line");
      verts.emplace_back(x, y, z);
    } else if (tok == "f") {
      std::vector<int> idx;
      std::string ref;
      while (ss >> ref) {
        // "i", "i/t", "i/t/n", "i//n" all start with the vertex index
        std::size_t pos = 0;
        long v = std::stol(ref, &pos);
        if (pos == 0) r.fail("bad face reference");
        if (v < 0) v = static_cast<long>(verts.size()) + v + 1;
        idx.push_back(static_cast<int>(v - 1));
      }
      if (idx.size() != 3) r.fail("only triangle faces are supported");
      std::array<int, 3> f = {idx[0], idx[1], idx[2]};
      check_face(r, f, static_cast<int>(verts.size()));
      faces.push_back(f);
    }
    // vn/vt/usemtl/etc. ignored
  }
  return TriMesh(std::move(verts), std::move(faces));
}

}  // namespace

MeshFormat infer_format(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".off") return MeshFormat::OFF;
  if (ext == ".ply") return MeshFormat::PLY_ASCII;
  if (ext == ".obj") return MeshFormat::OBJ;
  throw UnsupportedFormat("unrecognized mesh extension: " + path.string());
}

TriMesh load_mesh(const std::filesystem::path& path,
                  std::optional<MeshFormat> format) {
  if (!std::filesystem::exists(path))
    throw IoError("no such file: " + path.string());
  const MeshFormat fmt = format ? *format : infer_format(path);
  switch (fmt) {
    case MeshFormat::OFF:
      return parse_off(path);
    case MeshFormat::PLY_ASCII:
      return parse_ply(path);
    case MeshFormat::OBJ:
      return parse_obj(path);
  }
  throw UnsupportedFormat("unknown format enum");
}

void write_off(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "OFF\n"
      << mesh.num_vertices() << ' ' << mesh.num_faces() << ' '
      << mesh.num_edges() << '\n';
  out.precision(17);
  for (const auto& v : mesh.vertices())
    out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.faces())
    out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace sispec
