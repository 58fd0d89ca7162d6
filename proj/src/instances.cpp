#include "bigframe/instances.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bigframe/rng.hpp"

namespace bigframe {

void GeneratorSpec::validate() const {
  if (ambient_dim < 1 || ambient_dim > 64)
    throw SpecInvalid("generator: ambient_dim must be in [1, 64]");
  if (family_size < 1)
    throw SpecInvalid("generator: family_size must be positive");
}

GeneratorSpec::Kind parse_kind(const std::string& name) {
  if (name == "generic") return GeneratorSpec::Kind::generic;
  if (name == "diagonal") return GeneratorSpec::Kind::diagonal;
  if (name == "parseval") return GeneratorSpec::Kind::parseval;
  if (name == "rank_deficient_k") return GeneratorSpec::Kind::rank_deficient_k;
  if (name == "tight") return GeneratorSpec::Kind::tight;
  throw SpecInvalid("generator: unknown kind '" + name + "'");
}

const char* kind_name(GeneratorSpec::Kind kind) {
  switch (kind) {
    case GeneratorSpec::Kind::generic: return "generic";
    case GeneratorSpec::Kind::diagonal: return "diagonal";
    case GeneratorSpec::Kind::parseval: return "parseval";
    case GeneratorSpec::Kind::rank_deficient_k: return "rank_deficient_k";
    case GeneratorSpec::Kind::tight: return "tight";
  }
  return "unknown";
}

BiGFrameSystem example_3_4() {
  BiGFrameSystem sys;
  sys.phi.ambient_dim = sys.psi.ambient_dim = 4;
  sys.phi.subspace_dims = sys.psi.subspace_dims = {1, 2, 3, 4};
  const double phi_coeff[4] = {1.0, 1.0, 3.0, 4.0};
  const double psi_coeff[4] = {1.0, 1.0, 1.0 / 3.0, 1.0 / 4.0};
  // Operator i picks coordinate src and writes basis vector dst of K_i.
  const int src[4] = {0, 0, 1, 2};
  const int dst[4] = {0, 0, 2, 3};
  for (int i = 0; i < 4; ++i) {
    Matrix p = Matrix::Zero(i + 1, 4);
    Matrix q = Matrix::Zero(i + 1, 4);
    p(dst[i], src[i]) = phi_coeff[i];
    q(dst[i], src[i]) = psi_coeff[i];
    sys.phi.operators.push_back(p);
    sys.psi.operators.push_back(q);
  }
  sys.k_op = Matrix::Zero(4, 4);
  sys.k_op(1, 0) = 1.0;  // Kx = <x, e1> e2
  return sys;
}

BiGFrameSystem example_3_6() {
  BiGFrameSystem sys;
  sys.phi.ambient_dim = sys.psi.ambient_dim = 4;
  sys.phi.subspace_dims = sys.psi.subspace_dims = {1, 1, 1, 1};
  for (int i = 0; i < 4; ++i) {
    Matrix p = Matrix::Zero(1, 4);
    Matrix q = Matrix::Zero(1, 4);
    p(0, i) = static_cast<double>(i + 1);
    q(0, i) = 1.0 / static_cast<double>(i + 1);
    sys.phi.operators.push_back(p);
    sys.psi.operators.push_back(q);
  }
  sys.k_op = Matrix::Identity(4, 4);
  return sys;
}

namespace {

Matrix random_unitary(int n, Rng& rng) {
  Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the phase so the factorization is unique-ish; not strictly needed.
  return q;
}

Matrix shaped_matrix(int n, const Eigen::VectorXd& svals, Rng& rng) {
  Matrix u = random_unitary(n, rng);
  Matrix v = random_unitary(n, rng);
  return u * svals.asDiagonal() * v.adjoint();
}

Matrix well_conditioned(int n, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = unif(rng);
  return shaped_matrix(n, s, rng);
}

Matrix inverse_psd_sqrt(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig((s + s.adjoint()) / 2.0);
  Eigen::VectorXd lam = eig.eigenvalues();
  Eigen::VectorXd inv(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    inv(i) = lam(i) > 0.0 ? 1.0 / std::sqrt(lam(i)) : 0.0;
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

Matrix random_operator(int dim, OperatorKind kind, std::uint64_t seed,
                       int rank) {
  if (dim < 1) throw SpecInvalid("random_operator: dim must be positive");
  Rng rng = make_rng(seed, 0x6f70u + static_cast<std::uint64_t>(kind));
  switch (kind) {
    case OperatorKind::positive: {
      Matrix g = gaussian_matrix(dim, dim, rng);
      Matrix p = g.adjoint() * g / static_cast<double>(dim);
      return (p + p.adjoint()) / 2.0;
    }
    case OperatorKind::invertible: {
      std::uniform_real_distribution<double> unif(0.2, 2.0);
      Eigen::VectorXd s(dim);
      for (int i = 0; i < dim; ++i) s(i) = unif(rng);
      return shaped_matrix(dim, s, rng);
    }
    case OperatorKind::rank_r: {
      if (rank < 0 || rank > dim)
        throw SpecInvalid("random_operator: rank must lie in [0, dim]");
      std::uniform_real_distribution<double> unif(0.5, 2.0);
      Eigen::VectorXd s = Eigen::VectorXd::Zero(dim);
      for (int i = 0; i < rank; ++i) s(i) = unif(rng);
      return shaped_matrix(dim, s, rng);
    }
  }
  throw SpecInvalid("random_operator: unknown kind");
}

BiGFrameSystem random_system(const GeneratorSpec& spec) {
  spec.validate();
  const int n = spec.ambient_dim;
  const int m = spec.family_size;
  Rng rng = make_rng(spec.seed,
                     0x5347u + 131ull * static_cast<std::uint64_t>(spec.kind) +
                         17ull * static_cast<std::uint64_t>(n) +
                         static_cast<std::uint64_t>(m));

  BiGFrameSystem sys;
  sys.phi.ambient_dim = sys.psi.ambient_dim = n;

  if (spec.kind == GeneratorSpec::Kind::diagonal) {
    std::uniform_real_distribution<double> unif(0.2, 2.0);
    for (int i = 0; i < m; ++i) {
      Vector a(n), b(n);
      for (int j = 0; j < n; ++j) a(j) = unif(rng);
      for (int j = 0; j < n; ++j) b(j) = unif(rng);
      sys.phi.subspace_dims.push_back(n);
      sys.psi.subspace_dims.push_back(n);
      sys.phi.operators.push_back(Matrix(a.asDiagonal()));
      sys.psi.operators.push_back(Matrix(b.asDiagonal()));
    }
    Vector kd(n);
    for (int j = 0; j < n; ++j) kd(j) = unif(rng);
    sys.k_op = Matrix(kd.asDiagonal());
    return sys;
  }

  std::uniform_int_distribution<int> dim_dist(1, n);
  int total = 0;
  for (int i = 0; i < m; ++i) {
    const int d = dim_dist(rng);
    sys.phi.subspace_dims.push_back(d);
    total += d;
  }
  if (total < n) sys.phi.subspace_dims.back() = n;  // keep the stack tall
  sys.psi.subspace_dims = sys.phi.subspace_dims;

  std::uniform_real_distribution<double> scale_dist(0.5, 2.0);
  const Matrix shared_right = well_conditioned(n, rng);
  for (int i = 0; i < m; ++i) {
    Matrix theta = gaussian_matrix(sys.phi.subspace_dims[i], n, rng);
    Matrix x = theta * shared_right;
    sys.phi.operators.push_back(scale_dist(rng) * x);
    sys.psi.operators.push_back(x);
  }

  switch (spec.kind) {
    case GeneratorSpec::Kind::generic:
      sys.k_op = random_operator(n, OperatorKind::invertible, rng());
      break;
    case GeneratorSpec::Kind::rank_deficient_k: {
      const int r = std::max(1, n - 1);
      sys.k_op = random_operator(n, OperatorKind::rank_r, rng(), r);
      break;
    }
    case GeneratorSpec::Kind::parseval:
    case GeneratorSpec::Kind::tight: {
      sys.k_op = random_operator(n, OperatorKind::invertible, rng());
      const double c = spec.kind == GeneratorSpec::Kind::parseval
                           ? 1.0
                           : scale_dist(rng);
      Matrix s = biframe_operator(sys);
      Matrix target = c * (sys.k_op * sys.k_op.adjoint());
      Matrix w = inverse_psd_sqrt(s) * psd_sqrt(target);
      for (int i = 0; i < m; ++i) {
        sys.phi.operators[i] = sys.phi.operators[i] * w;
        sys.psi.operators[i] = sys.psi.operators[i] * w;
      }
      break;
    }
    default:
      break;
  }
  return sys;
}

// --- bigframe v1 text format -------------------------------------------

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_row(std::string& out, const Matrix& m, Eigen::Index row) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j) out += ' ';
    append_number(out, m(row, j).real());
    out += ' ';
    append_number(out, m(row, j).imag());
  }
  out += '\n';
}

class LineReader {
 public:
  explicit LineReader(const std::string& text) : text_(text) {}

  // Next non-comment line, or nullopt at end of input.
  std::optional<std::string> next() {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string::npos) end = text_.size();
      std::string line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] == '#') continue;
      return line;
    }
    return std::nullopt;
  }

  int line_no() const { return line_no_; }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + tok.size() && std::isfinite(out);
}

struct Parser {
  LineReader reader;

  explicit Parser(const std::string& text) : reader(text) {}

  std::string expect_line(const std::string& section) {
    auto line = reader.next();
    if (!line)
      throw ParseError(reader.line_no() + 1,
                       "unexpected end of input, expected " + section);
    return *line;
  }

  long expect_keyword_int(const std::string& keyword) {
    std::string line = expect_line("'" + keyword + "'");
    auto tokens = split_tokens(line);
    if (tokens.size() != 2 || tokens[0] != keyword)
      throw ParseError(reader.line_no(), "expected '" + keyword + " <value>'");
    char* end = nullptr;
    long v = std::strtol(tokens[1].c_str(), &end, 10);
    if (end != tokens[1].c_str() + tokens[1].size() || v < 1)
      throw ParseError(reader.line_no(),
                       "expected a positive integer after '" + keyword + "'");
    return v;
  }

  void expect_keyword(const std::string& keyword, const std::string& where) {
    std::string line = expect_line("'" + keyword + "'" + where);
    auto tokens = split_tokens(line);
    if (tokens.size() != 1 || tokens[0] != keyword)
      throw ParseError(reader.line_no(), "expected '" + keyword + "'" + where);
  }

  Matrix read_rows(int rows, int cols, const std::string& context) {
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      std::string line = expect_line("row " + std::to_string(r + 1) + " of " +
                                     context);
      auto tokens = split_tokens(line);
      if (!tokens.empty()) {
        double probe;
        if (!parse_double(tokens[0], probe) && context != "K")
          throw ParseError(reader.line_no(),
                           context + ": expected " + std::to_string(rows) +
                               " rows");
      }
      if (tokens.size() != static_cast<std::size_t>(2 * cols))
        throw ParseError(reader.line_no(),
                         "expected " + std::to_string(cols) + " entries");
      for (int c = 0; c < cols; ++c) {
        double re, im;
        if (!parse_double(tokens[2 * c], re) ||
            !parse_double(tokens[2 * c + 1], im))
          throw ParseError(reader.line_no(), "malformed or non-finite entry");
        m(r, c) = Complex(re, im);
      }
    }
    return m;
  }
};

}  // namespace

std::string serialize(const BiGFrameSystem& sys) {
  sys.validate();
  std::string out = "bigframe v1\n";
  out += "dim " + std::to_string(sys.phi.ambient_dim) + "\n";
  out += "count " + std::to_string(sys.phi.size()) + "\n";
  for (std::size_t i = 0; i < sys.phi.size(); ++i) {
    out += "subdim " + std::to_string(sys.phi.subspace_dims[i]) + "\n";
    out += "phi\n";
    for (Eigen::Index r = 0; r < sys.phi.operators[i].rows(); ++r)
      append_row(out, sys.phi.operators[i], r);
    out += "psi\n";
    for (Eigen::Index r = 0; r < sys.psi.operators[i].rows(); ++r)
      append_row(out, sys.psi.operators[i], r);
  }
  out += "K\n";
  for (Eigen::Index r = 0; r < sys.k_op.rows(); ++r)
    append_row(out, sys.k_op, r);
  return out;
}

BiGFrameSystem deserialize(const std::string& text) {
  Parser p(text);
  {
    std::string header = p.expect_line("'bigframe v1' header");
    if (header != "bigframe v1")
      throw ParseError(p.reader.line_no(), "expected 'bigframe v1' header");
  }
  const long n = p.expect_keyword_int("dim");
  const long count = p.expect_keyword_int("count");

  BiGFrameSystem sys;
  sys.phi.ambient_dim = sys.psi.ambient_dim = static_cast<int>(n);
  for (long i = 1; i <= count; ++i) {
    const std::string op = "operator " + std::to_string(i);
    const long d = p.expect_keyword_int("subdim");
    sys.phi.subspace_dims.push_back(static_cast<int>(d));
    sys.psi.subspace_dims.push_back(static_cast<int>(d));
    p.expect_keyword("phi", " for " + op);
    sys.phi.operators.push_back(
        p.read_rows(static_cast<int>(d), static_cast<int>(n), op));
    p.expect_keyword("psi", " for " + op);
    sys.psi.operators.push_back(
        p.read_rows(static_cast<int>(d), static_cast<int>(n), op));
  }
  p.expect_keyword("K", "");
  sys.k_op = p.read_rows(static_cast<int>(n), static_cast<int>(n), "K");
  sys.validate();
  return sys;
}

std::string serialize_matrix(const Matrix& m) {
  std::string out = "matrix v1\n";
  out += "rows " + std::to_string(m.rows()) + "\n";
  out += "cols " + std::to_string(m.cols()) + "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) append_row(out, m, r);
  return out;
}

Matrix deserialize_matrix(const std::string& text) {
  Parser p(text);
  {
    std::string header = p.expect_line("'matrix v1' header");
    if (header != "matrix v1")
      throw ParseError(p.reader.line_no(), "expected 'matrix v1' header");
  }
  const long rows = p.expect_keyword_int("rows");
  const long cols = p.expect_keyword_int("cols");
  return p.read_rows(static_cast<int>(rows), static_cast<int>(cols), "matrix");
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FrameError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

void save_system(const BiGFrameSystem& sys, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FrameError("cannot write '" + path + "'");
  out << serialize(sys);
}

BiGFrameSystem load_system(const std::string& path) {
  return deserialize(read_file(path));
}

Matrix load_matrix(const std::string& path) {
  return deserialize_matrix(read_file(path));
}

}  // namespace bigframe
