#include "tilelab/tiling.hpp"

#include "tilelab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace tilelab {

namespace {

class ComplementSearch {
public:
    ComplementSearch(const TileSet& A, const ComplementOptions& opts)
        : A_(A), ctx_(A.ctx()), M_(A.modulus()), opts_(opts), cover_(static_cast<std::size_t>(M_), 0)
    {
        kb_ = M_ / static_cast<Int>(A.size());
        top_ = ctx_.divisor_count() - 1;
        forbidden_.assign(static_cast<std::size_t>(ctx_.divisor_count()), 0);
        if (opts_.divisor_pruning) {
            DivisorMask d = div_set(A);
            for (auto i = d.bits.find_first(); i != Mask::npos; i = d.bits.find_next(i))
                if (static_cast<int>(i) != top_)
                    forbidden_[i] = 1;
        }
    }

    std::vector<TileSet> run()
    {
        if (opts_.normalize)
            place(0);
        dfs(0);
        std::sort(found_.begin(), found_.end());
        return std::move(found_);
    }

private:
    bool can_place(Int b) const
    {
        for (Int a : A_) {
            Int z = a + b;
            if (z >= M_)
                z -= M_;
            if (cover_[z])
                return false;
        }
        if (opts_.divisor_pruning)
            for (Int b2 : B_)
                if (forbidden_[ctx_.gcd_index(b - b2)])
                    return false;
        return true;
    }

    void place(Int b)
    {
        for (Int a : A_) {
            Int z = a + b;
            if (z >= M_)
                z -= M_;
            cover_[z] = 1;
        }
        B_.push_back(b);
    }

    void unplace()
    {
        Int b = B_.back();
        B_.pop_back();
        for (Int a : A_) {
            Int z = a + b;
            if (z >= M_)
                z -= M_;
            cover_[z] = 0;
        }
    }

    bool done() const { return opts_.limit && found_.size() >= opts_.limit; }

    void dfs(Int from)
    {
        Int n = from;
        while (n < M_ && cover_[n])
            ++n;
        if (n == M_) {
            found_.emplace_back(A_.context(), B_);
            return;
        }
        if (static_cast<Int>(B_.size()) >= kb_)
            return;
        for (Int a : A_) {
            Int b = ctx_.reduce(n - a);
            if (!can_place(b))
                continue;
            place(b);
            dfs(n + 1);
            unplace();
            if (done())
                return;
        }
    }

    const TileSet& A_;
    const ZmContext& ctx_;
    Int M_;
    ComplementOptions opts_;
    std::vector<std::uint8_t> cover_;
    std::vector<std::uint8_t> forbidden_;
    std::vector<Int> B_;
    std::vector<TileSet> found_;
    Int kb_ = 0;
    int top_ = 0;
};

} // namespace

std::vector<TileSet> find_complements(const TileSet& A, const ComplementOptions& opts)
{
    if (A.empty())
        throw InvalidInput("complement of an empty set");
    if (A.modulus() % static_cast<Int>(A.size()))
        return {};
    return ComplementSearch(A, opts).run();
}

std::vector<TileSet> find_complements(const TileSet& A, bool normalize)
{
    ComplementOptions o;
    o.normalize = normalize;
    return find_complements(A, o);
}

namespace {

// Joint search over (A, B) with 0 ∈ A ∩ B. The smallest uncovered residue n is covered by a
// unique pair (a, b); the branch records which of a, b are new, so each tiling is reached once.
class JointSearch {
public:
    JointSearch(const ZmContext& ctx, Int ka, const EnumerateOptions& opts, const RawTilingVisitor& visit,
                unsigned worker, std::atomic<bool>& stop)
        : ctx_(ctx), M_(ctx.modulus()), ka_(ka), kb_(ctx.modulus() / ka), opts_(opts), visit_(visit),
          worker_(worker), stop_(stop)
    {
        cover_.assign(static_cast<std::size_t>(M_), 0);
        inA_.assign(static_cast<std::size_t>(M_), 0);
        inB_.assign(static_cast<std::size_t>(M_), 0);
        divA_.assign(static_cast<std::size_t>(ctx.divisor_count()), 0);
        divB_.assign(static_cast<std::size_t>(ctx.divisor_count()), 0);
        top_ = ctx.divisor_count() - 1;
        A_.reserve(static_cast<std::size_t>(ka_));
        B_.reserve(static_cast<std::size_t>(kb_));
        A_.push_back(0);
        B_.push_back(0);
        inA_[0] = inB_[0] = 1;
        cover_[0] = 1;
    }

    // First-level branches at the smallest uncovered residue.
    struct Branch {
        int kind; // 0: new b, 1: new a, 2: both new
        Int a, b;
    };

    std::vector<Branch> branches()
    {
        std::vector<Branch> out;
        Int n = next_uncovered(0);
        if (n == M_)
            return out;
        collect(n, out);
        return out;
    }

    bool root_is_leaf() { return next_uncovered(0) == M_; }

    void emit_root() { leaf(); }

    void run_branch(const Branch& br)
    {
        Int n = next_uncovered(0);
        apply(br, n);
    }

    std::uint64_t count() const { return count_; }

private:
    Int next_uncovered(Int from) const
    {
        while (from < M_ && cover_[from])
            ++from;
        return from;
    }

    void collect(Int n, std::vector<Branch>& out) const
    {
        if (static_cast<Int>(B_.size()) < kb_)
            for (Int a : A_)
                out.push_back({0, a, ctx_.reduce(n - a)});
        if (static_cast<Int>(A_.size()) < ka_)
            for (Int b : B_)
                out.push_back({1, ctx_.reduce(n - b), b});
        if (static_cast<Int>(A_.size()) < ka_ && static_cast<Int>(B_.size()) < kb_)
            for (Int a = 0; a < M_; ++a) {
                Int b = ctx_.reduce(n - a);
                if (!inA_[a] && !inB_[b])
                    out.push_back({2, a, b});
            }
    }

    bool check_deadline()
    {
        if ((++nodes_ & 0xFFF) == 0 && opts_.deadline && std::chrono::steady_clock::now() > *opts_.deadline)
            stop_.store(true);
        return !stop_.load(std::memory_order_relaxed);
    }

    bool try_add_a(Int a)
    {
        if (inA_[a])
            return false;
        for (Int b : B_) {
            Int z = a + b;
            if (z >= M_)
                z -= M_;
            if (cover_[z])
                return false;
        }
        if (opts_.divisor_pruning)
            for (Int a2 : A_) {
                int g = ctx_.gcd_index(a - a2);
                if (divB_[g])
                    return false;
            }
        for (Int b : B_) {
            Int z = a + b;
            if (z >= M_)
                z -= M_;
            cover_[z] = 1;
        }
        for (Int a2 : A_)
            ++divA_[ctx_.gcd_index(a - a2)];
        A_.push_back(a);
        inA_[a] = 1;
        return true;
    }

    void undo_a()
    {
        Int a = A_.back();
        A_.pop_back();
        inA_[a] = 0;
        for (Int a2 : A_)
            --divA_[ctx_.gcd_index(a - a2)];
        for (Int b : B_) {
            Int z = a + b;
            if (z >= M_)
                z -= M_;
            cover_[z] = 0;
        }
    }

    bool try_add_b(Int b)
    {
        if (inB_[b])
            return false;
        for (Int a : A_) {
            Int z = a + b;
            if (z >= M_)
                z -= M_;
            if (cover_[z])
                return false;
        }
        if (opts_.divisor_pruning)
            for (Int b2 : B_) {
                int g = ctx_.gcd_index(b - b2);
                if (divA_[g])
                    return false;
            }
        for (Int a : A_) {
            Int z = a + b;
            if (z >= M_)
                z -= M_;
            cover_[z] = 1;
        }
        for (Int b2 : B_)
            ++divB_[ctx_.gcd_index(b - b2)];
        B_.push_back(b);
        inB_[b] = 1;
        return true;
    }

    void undo_b()
    {
        Int b = B_.back();
        B_.pop_back();
        inB_[b] = 0;
        for (Int b2 : B_)
            --divB_[ctx_.gcd_index(b - b2)];
        for (Int a : A_) {
            Int z = a + b;
            if (z >= M_)
                z -= M_;
            cover_[z] = 0;
        }
    }

    void apply(const Branch& br, Int n)
    {
        switch (br.kind) {
        case 0:
            if (try_add_b(br.b)) {
                dfs(n + 1);
                undo_b();
            }
            break;
        case 1:
            if (try_add_a(br.a)) {
                dfs(n + 1);
                undo_a();
            }
            break;
        default:
            if (try_add_a(br.a)) {
                if (try_add_b(br.b)) {
                    dfs(n + 1);
                    undo_b();
                }
                undo_a();
            }
        }
    }

    void leaf()
    {
        ++count_;
        visit_(A_, B_, worker_);
    }

    void dfs(Int from)
    {
        if (!check_deadline())
            return;
        Int n = next_uncovered(from);
        if (n == M_) {
            leaf();
            return;
        }
        const bool roomA = static_cast<Int>(A_.size()) < ka_;
        const bool roomB = static_cast<Int>(B_.size()) < kb_;
        if (roomB) {
            for (std::size_t i = 0; i < A_.size(); ++i) {
                Int b = n - A_[i];
                if (b < 0)
                    b += M_;
                if (try_add_b(b)) {
                    dfs(n + 1);
                    undo_b();
                }
            }
        }
        if (roomA) {
            for (std::size_t i = 0; i < B_.size(); ++i) {
                Int a = n - B_[i];
                if (a < 0)
                    a += M_;
                if (try_add_a(a)) {
                    dfs(n + 1);
                    undo_a();
                }
            }
        }
        if (roomA && roomB) {
            for (Int a = 0; a < M_; ++a) {
                Int b = n - a;
                if (b < 0)
                    b += M_;
                if (inA_[a] || inB_[b])
                    continue;
                if (try_add_a(a)) {
                    if (try_add_b(b)) {
                        dfs(n + 1);
                        undo_b();
                    }
                    undo_a();
                }
            }
        }
    }

    const ZmContext& ctx_;
    Int M_, ka_, kb_;
    const EnumerateOptions& opts_;
    const RawTilingVisitor& visit_;
    unsigned worker_;
    std::atomic<bool>& stop_;
    std::vector<std::uint8_t> cover_, inA_, inB_;
    std::vector<int> divA_, divB_;
    std::vector<Int> A_, B_;
    int top_ = 0;
    std::uint64_t nodes_ = 0;
    std::uint64_t count_ = 0;
};

} // namespace

EnumerationStats for_each_tiling_raw(const Context& ctx, const EnumerateOptions& opts, const RawTilingVisitor& visit)
{
    const Int M = ctx->modulus();
    std::atomic<bool> stop{false};
    std::atomic<std::uint64_t> emitted{0};

    // Non-normalized output expands each normalized B into its distinct translates.
    RawTilingVisitor expand = [&](std::span<const Int> A, std::span<const Int> B, unsigned w) {
        auto admit = [&] {
            if (opts.limit && emitted.fetch_add(1) >= opts.limit) {
                stop.store(true);
                return false;
            }
            if (!opts.limit)
                ++emitted;
            return true;
        };
        if (opts.normalize) {
            if (admit())
                visit(A, B, w);
            return;
        }
        std::vector<std::uint8_t> inB(static_cast<std::size_t>(M), 0);
        for (Int b : B)
            inB[b] = 1;
        Int period = M;
        for (Int u = 1; u < M; ++u) {
            if (M % u)
                continue;
            bool inv = true;
            for (Int b : B)
                if (!inB[(b + u) % M]) {
                    inv = false;
                    break;
                }
            if (inv) {
                period = u;
                break;
            }
        }
        std::vector<Int> shifted(B.size());
        for (Int t = 0; t < period; ++t) {
            for (std::size_t i = 0; i < B.size(); ++i)
                shifted[i] = (B[i] + t) % M;
            if (!admit())
                return;
            visit(A, shifted, w);
        }
    };

    struct Task {
        Int ka;
        bool root;
        JointSearch::Branch br;
    };
    std::vector<Task> tasks;
    for (Int ka : ctx->divisors()) {
        if (opts.size_of_A && *opts.size_of_A != ka)
            continue;
        JointSearch probe(*ctx, ka, opts, expand, 0, stop);
        if (probe.root_is_leaf()) {
            tasks.push_back({ka, true, {}});
            continue;
        }
        for (const auto& br : probe.branches())
            tasks.push_back({ka, false, br});
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&](unsigned w) {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size() || stop.load())
                return;
            const Task& t = tasks[i];
            JointSearch s(*ctx, t.ka, opts, expand, w, stop);
            if (t.root)
                s.emit_root();
            else
                s.run_branch(t.br);
        }
    };
    unsigned jobs = std::max(1u, opts.jobs);
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(worker, w);
        for (auto& th : pool)
            th.join();
    }
    EnumerationStats st;
    st.tilings = opts.limit ? std::min<std::uint64_t>(emitted.load(), opts.limit) : emitted.load();
    st.complete = !stop.load();
    return st;
}

EnumerationStats for_each_tiling(const Context& ctx, const EnumerateOptions& opts, const TilingVisitor& visit)
{
    return for_each_tiling_raw(ctx, opts, [&](std::span<const Int> A, std::span<const Int> B, unsigned w) {
        Tiling T(TileSet(ctx, std::vector<Int>(A.begin(), A.end())), TileSet(ctx, std::vector<Int>(B.begin(), B.end())));
        visit(T, w);
    });
}

std::vector<Tiling> enumerate_tilings(const Context& ctx, bool normalize)
{
    EnumerateOptions o;
    o.normalize = normalize;
    std::vector<Tiling> out;
    std::mutex mu;
    for_each_tiling(ctx, o, [&](const Tiling& T, unsigned) {
        std::lock_guard lock(mu);
        out.push_back(T);
    });
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace tilelab
