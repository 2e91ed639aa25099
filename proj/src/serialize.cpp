#include "tomoinfo/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tomoinfo {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return nlohmann::json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j, int dim, const char* what) {
  if (!j.contains("re") || !j.contains("im")) {
    throw std::invalid_argument(std::string(what) + ": missing \"re\" or \"im\" field");
  }
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || !im.is_array() || re.size() != static_cast<std::size_t>(dim) ||
      im.size() != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument(std::string(what) + ": \"re\"/\"im\" must be dim x dim arrays");
  }
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& re_row = re.at(static_cast<std::size_t>(r));
    const auto& im_row = im.at(static_cast<std::size_t>(r));
    if (re_row.size() != static_cast<std::size_t>(dim) ||
        im_row.size() != static_cast<std::size_t>(dim)) {
      throw std::invalid_argument(std::string(what) + ": ragged matrix rows");
    }
    for (int c = 0; c < dim; ++c) {
      m(r, c) = std::complex<double>(re_row.at(static_cast<std::size_t>(c)).get<double>(),
                                     im_row.at(static_cast<std::size_t>(c)).get<double>());
    }
  }
  return m;
}

int read_dim(const nlohmann::json& j, const char* what) {
  if (!j.contains("dim") || !j.at("dim").is_number_integer()) {
    throw std::invalid_argument(std::string(what) + ": missing integer \"dim\" field");
  }
  const int dim = j.at("dim").get<int>();
  if (dim < 2) {
    throw std::invalid_argument(std::string(what) + ": \"dim\" must be >= 2");
  }
  return dim;
}

}  // namespace

nlohmann::json to_json(const DensityMatrix& rho) {
  nlohmann::json j = matrix_to_json(rho.matrix());
  j["dim"] = rho.dim();
  return j;
}

DensityMatrix density_from_json(const nlohmann::json& j, bool require_physical) {
  const int dim = read_dim(j, "state");
  Eigen::MatrixXcd m = matrix_from_json(j, dim, "state");
  return require_physical ? DensityMatrix::physical(std::move(m))
                          : DensityMatrix::unchecked(std::move(m));
}

nlohmann::json to_json(const MubSet& set) {
  nlohmann::json bases = nlohmann::json::array();
  for (int a = 0; a <= set.dim(); ++a) {
    nlohmann::json basis = nlohmann::json::array();
    for (int j = 0; j < set.dim(); ++j) {
      basis.push_back(matrix_to_json(set.projector(a, j)));
    }
    bases.push_back(std::move(basis));
  }
  return nlohmann::json{{"dim", set.dim()}, {"bases", std::move(bases)}};
}

MubSet mub_from_json(const nlohmann::json& j) {
  const int dim = read_dim(j, "MUB set");
  if (!j.contains("bases") || !j.at("bases").is_array() ||
      j.at("bases").size() != static_cast<std::size_t>(dim + 1)) {
    throw std::invalid_argument("MUB set: \"bases\" must hold dim + 1 bases");
  }
  std::vector<Eigen::MatrixXcd> projectors;
  projectors.reserve(static_cast<std::size_t>(dim + 1) * static_cast<std::size_t>(dim));
  for (const auto& basis : j.at("bases")) {
    if (!basis.is_array() || basis.size() != static_cast<std::size_t>(dim)) {
      throw std::invalid_argument("MUB set: each basis must hold dim projectors");
    }
    for (const auto& pj : basis) {
      projectors.push_back(matrix_from_json(pj, dim, "MUB set"));
    }
  }
  return MubSet::from_projectors(dim, std::move(projectors));
}

nlohmann::json to_json(const MeasurementRecord& record) {
  validate_record(record);
  return nlohmann::json{{"dim", record.dim},
                        {"scheme", to_string(record.scheme)},
                        {"N", record.shots},
                        {"counts", record.counts}};
}

MeasurementRecord record_from_json(const nlohmann::json& j) {
  MeasurementRecord record;
  record.dim = read_dim(j, "measurement record");
  if (!j.contains("scheme") || !j.at("scheme").is_string()) {
    throw std::invalid_argument("measurement record: missing string \"scheme\" field");
  }
  record.scheme = scheme_from_string(j.at("scheme").get<std::string>());
  if (!j.contains("N") || !j.at("N").is_number_integer()) {
    throw std::invalid_argument("measurement record: missing integer \"N\" field");
  }
  record.shots = j.at("N").get<long long>();
  if (!j.contains("counts") || !j.at("counts").is_array()) {
    throw std::invalid_argument("measurement record: missing \"counts\" array");
  }
  record.counts = j.at("counts").get<std::vector<std::vector<long long>>>();
  validate_record(record);
  return record;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("file not found: " + path);
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    std::ostringstream msg;
    msg << "invalid JSON in " << path << ": " << e.what();
    throw std::runtime_error(msg.str());
  }
}

void save_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("cannot write file: " + path);
  }
  out << j.dump(2) << "\n";
}

}  // namespace tomoinfo
