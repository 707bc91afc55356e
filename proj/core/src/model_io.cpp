#include "substep/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace substep {

namespace {

// Tokenizes the stream with '#' comments stripped to end of line.
std::vector<std::string> tokenize(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      tokens.push_back(tok);
    }
  }
  return tokens;
}

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  std::string next(const char* what) {
    if (done()) {
      throw DomainError(std::string("model file: unexpected end of input, expected ") +
                        what);
    }
    return tokens_[pos_++];
  }

  double number(const char* what) {
    const std::string tok = next(what);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw DomainError("model file: expected a number for " + std::string(what) +
                        ", got '" + tok + "'");
    }
    if (used != tok.size()) {
      throw DomainError("model file: trailing characters in number '" + tok + "'");
    }
    return value;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

Eigen::MatrixXd read_matrix(TokenCursor& cur, Eigen::Index n, const char* name) {
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = cur.number(name);
    }
  }
  return m;
}

}  // namespace

LinearModel read_linear_model(std::istream& in) {
  TokenCursor cur(tokenize(in));

  if (cur.next("'dof'") != "dof") {
    throw DomainError("model file: must start with 'dof N'");
  }
  const double dof_val = cur.number("dof count");
  const auto n = static_cast<Eigen::Index>(dof_val);
  if (dof_val != static_cast<double>(n) || n < 1) {
    throw DomainError("model file: dof count must be a positive integer");
  }

  LinearModel model;
  for (const char* name : {"M", "C", "K"}) {
    const std::string tag = cur.next("matrix name");
    if (tag != name) {
      throw DomainError(std::string("model file: expected matrix '") + name +
                        "', got '" + tag + "'");
    }
    Eigen::MatrixXd m = read_matrix(cur, n, name);
    if (name[0] == 'M') model.M = std::move(m);
    else if (name[0] == 'C') model.C = std::move(m);
    else model.K = std::move(m);
  }

  if (cur.next("'load'") != "load") {
    throw DomainError("model file: expected 'load' after the matrices");
  }
  const std::string kind = cur.next("load kind (zero|sin|exp)");
  if (kind == "zero") {
    model.load = [n](double) { return Eigen::VectorXd::Zero(n); };
  } else if (kind == "sin" || kind == "exp") {
    double freq = 0.0;
    if (kind == "sin") {
      freq = cur.number("sin frequency");
    }
    if (cur.next("'amp'") != "amp") {
      throw DomainError("model file: expected 'amp' with per-DOF amplitudes");
    }
    Eigen::VectorXd amp(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      amp(i) = cur.number("amplitude");
    }
    if (kind == "sin") {
      model.load = [amp, freq](double t) {
        return Eigen::VectorXd(amp * std::sin(freq * t));
      };
    } else {
      model.load = [amp](double t) { return Eigen::VectorXd(amp * std::exp(t)); };
    }
  } else {
    throw DomainError("model file: unknown load kind '" + kind +
                      "' (expected zero, sin, or exp)");
  }

  if (!cur.done()) {
    throw DomainError("model file: trailing tokens after the load definition");
  }
  return model;
}

LinearModel read_linear_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("model file: cannot open '" + path + "'");
  }
  return read_linear_model(in);
}

}  // namespace substep
