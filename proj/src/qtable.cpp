#include "soda/qtable.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "soda/csv.hpp"

namespace soda {

void save_qtable(const QTable& q, const std::string& env_id, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "n_states,n_actions,env_id\n";
  out << q.n_states << "," << q.n_actions << "," << env_id << "\n";
  for (int s = 0; s < q.n_states; ++s) {
    for (int a = 0; a < q.n_actions; ++a) {
      if (a) out << ",";
      out << fmt_double_exact(q.at(s, a));
    }
    out << "\n";
  }
}

QTableSnapshot load_qtable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open qtable file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "n_states,n_actions,env_id")
    throw std::runtime_error(path + ": bad qtable header");
  if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated header");

  QTableSnapshot snap;
  {
    std::istringstream hdr(line);
    std::string field;
    std::getline(hdr, field, ',');
    int n_states = std::stoi(field);
    std::getline(hdr, field, ',');
    int n_actions = std::stoi(field);
    std::getline(hdr, snap.env_id);
    snap.table = QTable(n_states, n_actions);
  }
  for (int s = 0; s < snap.table.n_states; ++s) {
    if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated table");
    std::istringstream row(line);
    std::string field;
    for (int a = 0; a < snap.table.n_actions; ++a) {
      if (!std::getline(row, field, ','))
        throw std::runtime_error(path + ": short row");
      snap.table.at(s, a) = std::stod(field);
    }
  }
  return snap;
}

}  // namespace soda
