#include "itd/classifiers/model_io.hpp"

#include "itd/errors.hpp"

#include <fstream>
#include <sstream>

namespace itd {

namespace {

constexpr std::string_view kMagic = "itd-model";
constexpr int kVersion = 1;

class Writer {
public:
  explicit Writer(std::ostream &out) : out_(out) {}
  Writer &word(std::string_view w) {
    sep();
    buf_ += w;
    return *this;
  }
  Writer &num(double v) {
    sep();
    append_number(buf_, v);
    return *this;
  }
  Writer &nums(std::span<const double> v) {
    num(static_cast<double>(v.size()));
    for (double x : v)
      num(x);
    return *this;
  }
  void end() {
    buf_ += '\n';
    fresh_ = true;
    if (buf_.size() > (1 << 16)) {
      out_ << buf_;
      buf_.clear();
    }
  }
  ~Writer() { out_ << buf_; }

private:
  void sep() {
    if (!fresh_)
      buf_ += ' ';
    fresh_ = false;
  }
  std::ostream &out_;
  std::string buf_;
  bool fresh_ = true;
};

class Reader {
public:
  explicit Reader(std::istream &in) : in_(in) {}
  std::string word() {
    std::string w;
    if (!(in_ >> w))
      fail("unexpected end of model dump");
    return w;
  }
  void expect(std::string_view w) {
    if (word() != w)
      fail("expected '" + std::string(w) + "'");
  }
  double num() {
    auto w = word();
    auto v = parse_number(w);
    if (!v)
      fail("bad number '" + w + "'");
    return *v;
  }
  std::size_t count() {
    double v = num();
    if (v < 0 || v > 1e9 || v != std::floor(v))
      fail("bad count");
    return static_cast<std::size_t>(v);
  }
  std::vector<double> nums() {
    std::vector<double> v(count());
    for (auto &x : v)
      x = num();
    return v;
  }
  std::string line() {
    std::string s;
    in_ >> std::ws;
    if (!std::getline(in_, s))
      fail("unexpected end of model dump");
    return s;
  }
  [[noreturn]] static void fail(const std::string &msg) { throw Error(Errc::unparseable, msg); }

private:
  std::istream &in_;
};

void put_standardizer(Writer &w, const Standardizer &z) {
  w.word("mean").nums(z.mean).end();
  w.word("scale").nums(z.scale).end();
}

Standardizer get_standardizer(Reader &r) {
  Standardizer z;
  r.expect("mean");
  z.mean = r.nums();
  r.expect("scale");
  z.scale = r.nums();
  return z;
}

void put_present(Writer &w, const std::array<bool, kNumClasses> &present) {
  w.word("present");
  for (bool b : present)
    w.num(b ? 1 : 0);
  w.end();
}

std::array<bool, kNumClasses> get_present(Reader &r) {
  r.expect("present");
  std::array<bool, kNumClasses> p{};
  for (auto &b : p)
    b = r.num() != 0;
  return p;
}

void put_tree(Writer &w, const DecisionTree &t) {
  w.word("tree").num(static_cast<double>(t.nodes().size())).end();
  w.word("importance").nums(t.importance()).end();
  for (const auto &n : t.nodes()) {
    w.word(n.is_leaf() ? "L" : "N");
    if (!n.is_leaf())
      w.num(n.feature).num(n.threshold).num(n.left).num(n.right);
    w.num(n.support).num(n.label);
    for (double p : n.dist)
      w.num(p);
    w.end();
  }
}

DecisionTree get_tree(Reader &r, std::size_t d) {
  r.expect("tree");
  std::size_t n = r.count();
  r.expect("importance");
  auto imp = r.nums();
  if (imp.size() != d)
    Reader::fail("importance width differs from column count");
  std::vector<TreeNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto &node = nodes[i];
    auto kind = r.word();
    if (kind == "N") {
      node.feature = static_cast<std::int32_t>(r.count());
      node.threshold = r.num();
      node.left = static_cast<std::int32_t>(r.count());
      node.right = static_cast<std::int32_t>(r.count());
      if (static_cast<std::size_t>(node.feature) >= d || static_cast<std::size_t>(node.left) >= n ||
          static_cast<std::size_t>(node.right) >= n ||
          static_cast<std::size_t>(node.left) <= i || static_cast<std::size_t>(node.right) <= i)
        Reader::fail("bad tree node " + std::to_string(i));
    } else if (kind != "L") {
      Reader::fail("bad node kind '" + kind + "'");
    }
    node.support = r.num();
    auto label = r.count();
    if (label >= kNumClasses)
      Reader::fail("bad node label");
    node.label = static_cast<std::uint8_t>(label);
    for (auto &p : node.dist)
      p = r.num();
  }
  if (n == 0)
    Reader::fail("empty tree");
  return DecisionTree(std::move(nodes), std::move(imp));
}

} // namespace

void save_model(std::ostream &out, const TrainedModel &m) {
  Writer w(out);
  w.word(kMagic).num(kVersion).end();
  w.word("algorithm").word(algorithm_name(m.spec.algorithm)).end();
  w.word("seed").word(std::to_string(m.spec.seed)).end();
  w.word("params").num(static_cast<double>(m.spec.params.size())).end();
  for (const auto &[k, v] : m.spec.params)
    w.word(k).num(v).end();
  w.word("columns").num(static_cast<double>(m.columns.size())).end();
  for (const auto &c : m.columns)
    w.word(c).end();
  w.word("fit_seconds").num(m.fit_seconds).end();
  w.word("flags").num(m.degenerate).num(m.non_convergence).num(m.constant_class).end();
  std::visit(
      [&](const auto &s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          w.word("state").word("none").end();
        } else if constexpr (std::is_same_v<T, EnsembleModel>) {
          w.word("state").word("ensemble").num(static_cast<int>(s.vote)).end();
          w.word("alpha").nums(s.alpha).end();
          w.word("trees").num(static_cast<double>(s.trees.size())).end();
          for (const auto &t : s.trees)
            put_tree(w, t);
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          w.word("state").word("knn").num(static_cast<double>(s.k)).num(static_cast<double>(s.d)).end();
          put_standardizer(w, s.z);
          w.word("x").nums(s.x).end();
          std::vector<double> y(s.y.begin(), s.y.end());
          w.word("y").nums(y).end();
          w.word("count").nums(s.count).end();
        } else if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          w.word("state").word("gaussian_nb").num(static_cast<double>(s.d)).end();
          put_present(w, s.present);
          w.word("log_prior").nums(s.log_prior).end();
          w.word("mean").nums(s.mean).end();
          w.word("var").nums(s.var).end();
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          w.word("state").word("linear").num(static_cast<double>(s.d)).end();
          put_standardizer(w, s.z);
          put_present(w, s.present);
          w.word("w").nums(s.w).end();
        } else if constexpr (std::is_same_v<T, MlpModel>) {
          w.word("state").word("mlp").num(static_cast<double>(s.d)).num(static_cast<double>(s.hidden)).end();
          put_standardizer(w, s.z);
          put_present(w, s.present);
          w.word("w1").nums(s.w1).end();
          w.word("w2").nums(s.w2).end();
        }
      },
      m.state);
  w.word("end").end();
}

void save_model(const std::filesystem::path &path, const TrainedModel &model) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::io_failure, "cannot write " + path.string());
  save_model(out, model);
  out.flush();
  if (!out)
    throw Error(Errc::io_failure, "write failed for " + path.string());
}

TrainedModel load_model(std::istream &in) {
  Reader r(in);
  r.expect(kMagic);
  if (r.num() != kVersion)
    Reader::fail("unsupported model version");
  TrainedModel m;
  r.expect("algorithm");
  auto alg = parse_algorithm(r.word());
  if (!alg)
    Reader::fail("unknown algorithm");
  m.spec.algorithm = *alg;
  r.expect("seed");
  auto seed = r.word();
  try {
    m.spec.seed = std::stoull(seed);
  } catch (const std::exception &) {
    Reader::fail("bad seed");
  }
  r.expect("params");
  for (std::size_t i = r.count(); i > 0; --i) {
    auto k = r.word();
    m.spec.params[k] = r.num();
  }
  r.expect("columns");
  m.columns.resize(r.count());
  for (auto &c : m.columns)
    c = r.line();
  const std::size_t d = m.columns.size();
  r.expect("fit_seconds");
  m.fit_seconds = r.num();
  r.expect("flags");
  m.degenerate = r.num() != 0;
  m.non_convergence = r.num() != 0;
  m.constant_class = static_cast<std::uint8_t>(r.count());
  if (m.constant_class >= kNumClasses)
    Reader::fail("bad constant class");
  r.expect("state");
  auto kind = r.word();
  auto check = [&](std::size_t got, std::size_t want, const char *what) {
    if (got != want)
      Reader::fail(std::string("bad size for ") + what);
  };
  if (kind == "none") {
  } else if (kind == "ensemble") {
    EnsembleModel e;
    auto vote = r.count();
    if (vote > 2)
      Reader::fail("bad vote kind");
    e.vote = static_cast<EnsembleModel::Vote>(vote);
    r.expect("alpha");
    e.alpha = r.nums();
    r.expect("trees");
    std::size_t n = r.count();
    if (n == 0 || (!e.alpha.empty() && e.alpha.size() != n))
      Reader::fail("bad tree count");
    for (std::size_t t = 0; t < n; ++t)
      e.trees.push_back(get_tree(r, d));
    m.state = std::move(e);
  } else if (kind == "knn") {
    KnnModel k;
    k.k = r.count();
    k.d = r.count();
    check(k.d, d, "knn width");
    k.z = get_standardizer(r);
    r.expect("x");
    k.x = r.nums();
    r.expect("y");
    for (double v : r.nums()) {
      if (v < 0 || v >= kNumClasses)
        Reader::fail("bad knn label");
      k.y.push_back(static_cast<std::uint8_t>(v));
    }
    r.expect("count");
    k.count = r.nums();
    check(k.x.size(), k.y.size() * d, "knn store");
    check(k.count.size(), k.y.size(), "knn counts");
    check(k.z.mean.size(), d, "standardizer");
    m.state = std::move(k);
  } else if (kind == "gaussian_nb") {
    NaiveBayesModel nb;
    nb.d = r.count();
    check(nb.d, d, "naive bayes width");
    nb.present = get_present(r);
    r.expect("log_prior");
    auto lp = r.nums();
    check(lp.size(), kNumClasses, "log_prior");
    std::copy(lp.begin(), lp.end(), nb.log_prior.begin());
    r.expect("mean");
    nb.mean = r.nums();
    r.expect("var");
    nb.var = r.nums();
    check(nb.mean.size(), kNumClasses * d, "mean");
    check(nb.var.size(), kNumClasses * d, "var");
    m.state = std::move(nb);
  } else if (kind == "linear") {
    LinearModel lm;
    lm.d = r.count();
    check(lm.d, d, "linear width");
    lm.z = get_standardizer(r);
    lm.present = get_present(r);
    r.expect("w");
    lm.w = r.nums();
    check(lm.w.size(), kNumClasses * (d + 1), "weights");
    check(lm.z.mean.size(), d, "standardizer");
    m.state = std::move(lm);
  } else if (kind == "mlp") {
    MlpModel mlp;
    mlp.d = r.count();
    mlp.hidden = r.count();
    check(mlp.d, d, "mlp width");
    mlp.z = get_standardizer(r);
    mlp.present = get_present(r);
    r.expect("w1");
    mlp.w1 = r.nums();
    r.expect("w2");
    mlp.w2 = r.nums();
    check(mlp.w1.size(), mlp.hidden * (d + 1), "w1");
    check(mlp.w2.size(), kNumClasses * (mlp.hidden + 1), "w2");
    check(mlp.z.mean.size(), d, "standardizer");
    m.state = std::move(mlp);
  } else {
    Reader::fail("unknown model state '" + kind + "'");
  }
  r.expect("end");
  if (!m.degenerate && std::holds_alternative<std::monostate>(m.state))
    Reader::fail("model has no fitted state");
  return m;
}

TrainedModel load_model(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::io_failure, "cannot read " + path.string());
  return load_model(in);
}

} // namespace itd
