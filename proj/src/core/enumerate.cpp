#include "core/enumerate.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace tw {

namespace {

// Per-worker dense u64 accumulators; merged exactly into BigInt tables.
struct Accum {
  int nmax = 0;
  int mark_dim = 1;
  std::vector<std::uint64_t> N, a, d, h, r;
  std::vector<std::uint64_t> tp;  // [v*(nmax+1)+n], indicator weights only

  Accum(int nmax_, int mark_dim_, std::size_t tp_size)
      : nmax(nmax_), mark_dim(mark_dim_) {
    std::size_t sz =
        (std::size_t)(nmax + 1) * (std::size_t)(2 * nmax + 1) * (std::size_t)mark_dim;
    N.assign(sz, 0);
    a.assign(sz, 0);
    d.assign(sz, 0);
    h.assign(sz, 0);
    r.assign(sz, 0);
    tp.assign(tp_size, 0);
  }

  std::size_t idx(int n, int m, int mark) const {
    return ((std::size_t)n * (std::size_t)(2 * nmax + 1) + (std::size_t)(m + nmax)) *
               (std::size_t)mark_dim +
           (std::size_t)mark;
  }
};

struct WalkFrame {
  VertexId v;
  int height;
  int min_h, max_h;
  bool uhs_ok;  // strictly above start at every positive time
  bool rd_ok;   // never below start
  std::int64_t mark;
};

// Records the current node in every table it belongs to.
inline void account(Accum& acc, const WalkFrame& f, int len, bool want_tp) {
  int mark = (int)f.mark;
  acc.N[acc.idx(len, f.height, mark)]++;
  if (f.min_h == 0 && f.height == f.max_h) acc.a[acc.idx(len, f.height, mark)]++;
  if (f.max_h == 0 && f.height == f.min_h) acc.d[acc.idx(len, -f.height, mark)]++;
  if (f.uhs_ok) acc.h[acc.idx(len, f.height, mark)]++;
  if (f.rd_ok) acc.r[acc.idx(len, f.height, mark)]++;
  if (want_tp) acc.tp[(std::size_t)f.v * (std::size_t)(acc.nmax + 1) + (std::size_t)len]++;
}

struct PrefixItem {
  std::vector<VertexId> vertices;  // length prefix_depth + 1
  std::vector<int> moves;
};

class Dfs {
 public:
  Dfs(const GraphModel& g, const Weight& w, int nmax, bool want_tp)
      : g_(g), w_(w), nmax_(nmax), want_tp_(want_tp) {}

  void run(Accum& acc, WeightState& st, const WalkFrame& root_frame, int start_len) {
    acc_ = &acc;
    recurse(st, root_frame, start_len);
  }

 private:
  void recurse(WeightState& st, const WalkFrame& f, int len) {
    account(*acc_, f, len, want_tp_);
    if (len == nmax_) return;
    const auto& nbrs = g_.neighbor_ids(f.v);
    const auto& moves = g_.moves();
    for (std::size_t mi = 0; mi < nbrs.size(); ++mi) {
      VertexId to = nbrs[mi];
      StepOutcome o = st.extend(to, moves[mi]);
      if (o.admissible) {
        WalkFrame nf;
        nf.v = to;
        nf.height = f.height + moves[mi].height_inc;
        nf.min_h = std::min(f.min_h, nf.height);
        nf.max_h = std::max(f.max_h, nf.height);
        nf.uhs_ok = f.uhs_ok && nf.height > 0;
        nf.rd_ok = f.rd_ok && nf.height >= 0;
        nf.mark = f.mark + o.mark_delta;
        recurse(st, nf, len + 1);
      }
      st.undo_last();
    }
  }

  const GraphModel& g_;
  const Weight& w_;
  int nmax_;
  bool want_tp_;
  Accum* acc_ = nullptr;
};

// Sequential pass: accounts every node shallower than depth and collects the
// depth-length admissible prefixes as parallel work items.
void collect_prefixes(const GraphModel& g, const Weight& w, int depth, int nmax,
                      bool want_tp, Accum& acc, std::vector<PrefixItem>& items) {
  std::vector<VertexId> vstack{kRoot};
  std::vector<int> mstack;
  auto st = w.start(kRoot);

  std::function<void(const WalkFrame&, int)> go = [&](const WalkFrame& f, int len) {
    if (len == depth) {
      items.push_back({vstack, mstack});
      return;
    }
    account(acc, f, len, want_tp);
    if (len == nmax) return;
    const auto& nbrs = g.neighbor_ids(f.v);
    const auto& moves = g.moves();
    for (std::size_t mi = 0; mi < nbrs.size(); ++mi) {
      VertexId to = nbrs[mi];
      StepOutcome o = st->extend(to, moves[mi]);
      if (o.admissible) {
        WalkFrame nf;
        nf.v = to;
        nf.height = f.height + moves[mi].height_inc;
        nf.min_h = std::min(f.min_h, nf.height);
        nf.max_h = std::max(f.max_h, nf.height);
        nf.uhs_ok = f.uhs_ok && nf.height > 0;
        nf.rd_ok = f.rd_ok && nf.height >= 0;
        nf.mark = f.mark + o.mark_delta;
        vstack.push_back(to);
        mstack.push_back((int)mi);
        go(nf, len + 1);
        vstack.pop_back();
        mstack.pop_back();
      }
      st->undo_last();
    }
  };
  WalkFrame root{kRoot, 0, 0, 0, true, true, 0};
  go(root, 0);
}

void merge_into(ExactTable& dst, const std::vector<std::uint64_t>& src, const Accum& acc) {
  std::size_t i = 0;
  for (int n = 0; n <= acc.nmax; ++n)
    for (int m = -acc.nmax; m <= acc.nmax; ++m)
      for (int mark = 0; mark < acc.mark_dim; ++mark, ++i)
        if (src[i] != 0) dst.at(n, m, mark) += src[i];
}

}  // namespace

WalkTables enumerate_walks(const GraphModel& model, const Weight& w,
                           const EnumerateOptions& opt) {
  const int nmax = opt.nmax;
  if (nmax < 0) fail(ErrorCode::Usage, "nmax must be >= 0");
  if (!model.sealed() || model.seal_radius() < nmax)
    fail(ErrorCode::Usage, "enumeration requires a ball sealed to radius >= nmax");
  if ((double)nmax * std::log2((double)model.degree()) > 62.0)
    fail(ErrorCode::SizeLimit, "path count may overflow 64-bit accumulators at this nmax");
  if (opt.want_two_point && !w.indicator())
    fail(ErrorCode::Unsupported, "two-point decomposition is kept for indicator weights");

  int mark_dim = (int)w.max_mark(nmax) + 1;
  std::size_t tp_size =
      opt.want_two_point ? model.vertex_count() * (std::size_t)(nmax + 1) : 0;

  WalkTables out;
  out.model = model.describe();
  out.weight = w.name();
  out.nmax = nmax;
  out.w_base = model.w_base();
  out.partition = ExactTable(nmax, mark_dim);
  out.up_bridge = ExactTable(nmax, mark_dim);
  out.down_bridge = ExactTable(nmax, mark_dim);
  out.upper_half = ExactTable(nmax, mark_dim);
  out.rev_descent = ExactTable(nmax, mark_dim);

  int depth = std::min(opt.prefix_depth, nmax);
  Accum seq_acc(nmax, mark_dim, tp_size);
  std::vector<PrefixItem> items;
  collect_prefixes(model, w, depth, nmax, opt.want_two_point, seq_acc, items);

  int threads = opt.threads > 0 ? opt.threads
                                : (int)std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<int>(threads, std::max<std::size_t>(items.size(), 1));

  std::vector<Accum> worker_acc;
  worker_acc.reserve((std::size_t)threads);
  for (int t = 0; t < threads; ++t) worker_acc.emplace_back(nmax, mark_dim, tp_size);

  std::atomic<std::size_t> next{0};
  auto worker = [&](int tid) {
    Dfs dfs(model, w, nmax, opt.want_two_point);
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= items.size()) break;
      const PrefixItem& item = items[i];
      auto st = w.start(kRoot);
      WalkFrame f{kRoot, 0, 0, 0, true, true, 0};
      for (std::size_t s = 0; s < item.moves.size(); ++s) {
        const MoveDef& mv = model.moves()[(std::size_t)item.moves[s]];
        StepOutcome o = st->extend(item.vertices[s + 1], mv);
        f.v = item.vertices[s + 1];
        f.height += mv.height_inc;
        f.min_h = std::min(f.min_h, f.height);
        f.max_h = std::max(f.max_h, f.height);
        f.uhs_ok = f.uhs_ok && f.height > 0;
        f.rd_ok = f.rd_ok && f.height >= 0;
        f.mark += o.mark_delta;
      }
      dfs.run(worker_acc[(std::size_t)tid], *st, f, depth);
    }
  };

  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  for (auto& th : pool) th.join();

  auto merge_all = [&](const Accum& acc) {
    merge_into(out.partition, acc.N, acc);
    merge_into(out.up_bridge, acc.a, acc);
    merge_into(out.down_bridge, acc.d, acc);
    merge_into(out.upper_half, acc.h, acc);
    merge_into(out.rev_descent, acc.r, acc);
  };
  merge_all(seq_acc);
  for (const auto& acc : worker_acc) merge_all(acc);

  if (opt.want_two_point) {
    out.has_two_point = true;
    out.vertex_count = (int)model.vertex_count();
    out.two_point.assign(tp_size, BigInt(0));
    auto fold_tp = [&](const Accum& acc) {
      for (std::size_t i = 0; i < tp_size; ++i)
        if (acc.tp[i] != 0) out.two_point[i] += acc.tp[i];
    };
    fold_tp(seq_acc);
    for (const auto& acc : worker_acc) fold_tp(acc);
    out.tp_height.resize(model.vertex_count());
    out.tp_dist.resize(model.vertex_count());
    for (std::size_t v = 0; v < model.vertex_count(); ++v) {
      out.tp_height[v] = model.record((VertexId)v).height_units;
      out.tp_dist[v] = model.record((VertexId)v).dist_root;
    }
  }
  return out;
}

}  // namespace tw
