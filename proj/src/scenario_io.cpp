#include "manoma/scenario_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "manoma/error.hpp"

namespace manoma {

using nlohmann::json;

namespace {

json complex_matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix complex_matrix_from_json(const json& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.at(0).size());
  CMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows.at(i);
    if (static_cast<Eigen::Index>(row.size()) != c) throw DimensionError("ragged PRM in scenario");
    for (Eigen::Index j = 0; j < c; ++j) {
      m(i, j) = {row.at(j).at(0).get<double>(), row.at(j).at(1).get<double>()};
    }
  }
  return m;
}

json angles_to_json(const std::vector<PhysicalAngle>& phys, const std::vector<VirtualAngle>& virt) {
  json out = json::array();
  for (std::size_t i = 0; i < virt.size(); ++i) {
    json a = {{"virtual", {virt[i].vtheta, virt[i].vphi, virt[i].vomega}}};
    if (i < phys.size()) {
      a["theta"] = phys[i].theta;
      a["phi"] = phys[i].phi;
    }
    out.push_back(std::move(a));
  }
  return out;
}

void angles_from_json(const json& arr, std::vector<PhysicalAngle>& phys,
                      std::vector<VirtualAngle>& virt) {
  for (const auto& a : arr) {
    PhysicalAngle p{a.value("theta", 0.0), a.value("phi", 0.0)};
    phys.push_back(p);
    if (a.contains("virtual")) {
      const auto& v = a.at("virtual");
      virt.push_back({v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()});
    } else {
      virt.push_back(virtual_angles(p));
    }
  }
}

}  // namespace

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["wavelength"] = sc.geometry.wavelength;
  json fpa = json::array();
  for (Eigen::Index n = 0; n < sc.geometry.size(); ++n) {
    fpa.push_back({sc.geometry.fpa_positions(n, 0), sc.geometry.fpa_positions(n, 1),
                   sc.geometry.fpa_positions(n, 2)});
  }
  j["fpa_positions"] = std::move(fpa);
  j["noise_power"] = sc.noise_power;
  j["g0"] = sc.g0;
  j["path_loss_exp"] = sc.path_loss_exp;
  j["region_half"] = sc.region_half;
  json users = json::array();
  for (const auto& u : sc.users) {
    users.push_back({{"distance", u.distance},
                     {"rx", angles_to_json(u.rx_physical, u.rx_angles)},
                     {"tx", angles_to_json(u.tx_physical, u.tx_angles)},
                     {"prm", complex_matrix_to_json(u.prm)}});
  }
  j["users"] = std::move(users);
  return j.dump(1);
}

Scenario scenario_from_json(const std::string& text) {
  const json j = json::parse(text);
  Scenario sc;
  sc.geometry.wavelength = j.at("wavelength").get<double>();
  const json& fpa = j.at("fpa_positions");
  sc.geometry.fpa_positions.resize(static_cast<Eigen::Index>(fpa.size()), 3);
  for (std::size_t n = 0; n < fpa.size(); ++n) {
    for (int c = 0; c < 3; ++c) {
      sc.geometry.fpa_positions(static_cast<Eigen::Index>(n), c) = fpa.at(n).at(c).get<double>();
    }
  }
  sc.noise_power = j.at("noise_power").get<double>();
  sc.g0 = j.value("g0", sc.g0);
  sc.path_loss_exp = j.value("path_loss_exp", sc.path_loss_exp);
  sc.region_half = j.value("region_half", sc.region_half);
  for (const auto& ju : j.at("users")) {
    FieldResponse fr;
    fr.distance = ju.value("distance", 0.0);
    angles_from_json(ju.at("rx"), fr.rx_physical, fr.rx_angles);
    angles_from_json(ju.at("tx"), fr.tx_physical, fr.tx_angles);
    fr.prm = complex_matrix_from_json(ju.at("prm"));
    if (fr.prm.rows() != static_cast<Eigen::Index>(fr.rx_angles.size()) ||
        fr.prm.cols() != static_cast<Eigen::Index>(fr.tx_angles.size())) {
      throw DimensionError("scenario: PRM shape does not match path counts");
    }
    fr.tx_frm = transmit_frm(fr.tx_angles, sc.geometry);
    sc.users.push_back(std::move(fr));
  }
  return sc;
}

void save_scenario(const std::filesystem::path& path, const Scenario& sc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << scenario_to_json(sc) << '\n';
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

}  // namespace manoma
