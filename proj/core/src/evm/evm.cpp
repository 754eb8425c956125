// symx: dynamic symbolic execution for MiniVM and EVM bytecode
// Copyright 2026 The symx Authors.
// SPDX-License-Identifier: Apache-2.0

#include "symx/evm/evm.hpp"

#include "symx/engine/blob.hpp"
#include "symx/error.hpp"
#include "symx/evm/keccak.hpp"
#include "symx/smt/eval.hpp"

#include <algorithm>

namespace symx::evm
{
using engine::Concretize;
using engine::Continue;
using engine::Policy;
using engine::State;
using engine::StepResult;
using engine::Suspend;
using engine::Terminate;
using engine::Termination;

namespace
{
Expr w256(const Word& v)
{
    return Expr::constant(v, 256);
}

Expr storage_init()
{
    return Expr::const_array(smt::Sort::array(256, 256), 0);
}

Expr zero_byte()
{
    return Expr::constant(0, 8);
}

/// Big-endian concatenation of byte expressions (at least one byte).
Expr join(const std::vector<Expr>& bytes)
{
    Expr v = bytes.front();
    for (std::size_t i = 1; i < bytes.size(); ++i)
        v = smt::concat(v, bytes[i]);
    return v;
}

void write_exprs(engine::BlobWriter& out, const std::vector<Expr>& xs)
{
    out.u32(static_cast<std::uint32_t>(xs.size()));
    for (const auto& x : xs)
        out.expr(x);
}

std::vector<Expr> read_exprs(engine::BlobReader& in)
{
    std::vector<Expr> xs(in.u32());
    for (auto& x : xs)
        x = in.expr();
    return xs;
}

std::string hex_word(const Word& v)
{
    return "0x" + to_hex(v);
}
}  // namespace

const Word& caller_address()
{
    static const Word a = from_hex("ca11e400000000000000000000000000000ca11e");
    return a;
}

Word address_mask()
{
    return low_mask(160);
}

std::uint64_t make_location(const Word& address, std::size_t pc)
{
    return (static_cast<std::uint64_t>(to_u64(address & 0xffffffffu)) << 32) | (pc & 0xffffffffu);
}

// ---------------------------------------------------------------------------
// World

std::shared_ptr<const Code> Code::make(std::vector<std::uint8_t> bytes)
{
    auto c = std::make_shared<Code>();
    c->jumpdests = jump_destinations(bytes);
    c->offsets = instruction_offsets(bytes);
    c->bytes = std::move(bytes);
    return c;
}

World World::with_caller()
{
    World w;
    w.create_account(Word(1) << 255, caller_address());
    return w;
}

Word World::create_account(const Expr& balance, std::optional<Word> address)
{
    Word a = address.value_or(next_address_);
    a &= address_mask();
    if (accounts.contains(a))
        throw Error("account " + hex_word(a) + " already exists");
    if (!address)
        ++next_address_;
    accounts.emplace(a, Account{balance, Code::make({}), storage_init(), 0});
    return a;
}

Word World::create_account(const Word& balance, std::optional<Word> address)
{
    return create_account(w256(balance), address);
}

Word World::create_contract(std::vector<std::uint8_t> code, const Word& balance, std::optional<Word> address)
{
    const Word a = create_account(balance, address);
    accounts.at(a).code = Code::make(std::move(code));
    accounts.at(a).nonce = 1;
    return a;
}

Account* World::find(const Word& address)
{
    auto it = accounts.find(address);
    return it == accounts.end() ? nullptr : &it->second;
}

const Account* World::find(const Word& address) const
{
    auto it = accounts.find(address);
    return it == accounts.end() ? nullptr : &it->second;
}

Expr World::balance_of(const Expr& address) const
{
    if (address.is_constant())
    {
        const auto* a = find(address.value());
        return a ? a->balance : w256(0);
    }
    Expr v = w256(0);
    for (const auto& [addr, acct] : accounts)
        v = smt::ite(smt::eq(address, w256(addr)), acct.balance, v);
    return v;
}

void World::serialize(engine::BlobWriter& out) const
{
    out.u32(static_cast<std::uint32_t>(accounts.size()));
    for (const auto& [addr, a] : accounts)
    {
        out.word(addr);
        out.expr(a.balance);
        out.bytes(a.code->bytes);
        out.expr(a.storage);
        out.u64(a.nonce);
    }
    out.u32(static_cast<std::uint32_t>(sha3_pairs.size()));
    for (const auto& p : sha3_pairs)
    {
        out.bytes(p.preimage);
        out.word(p.digest);
    }
    out.u64(tx_count);
    out.word(next_address_);
}

World World::deserialize(engine::BlobReader& in)
{
    World w;
    for (auto n = in.u32(); n > 0; --n)
    {
        const Word addr = in.word();
        Account a;
        a.balance = in.expr();
        a.code = Code::make(in.bytes());
        a.storage = in.expr();
        a.nonce = in.u64();
        w.accounts.emplace(addr, std::move(a));
    }
    for (auto n = in.u32(); n > 0; --n)
    {
        Sha3Pair p;
        p.preimage = in.bytes();
        p.digest = in.word();
        w.sha3_pairs.push_back(std::move(p));
    }
    w.tx_count = in.u64();
    w.next_address_ = in.word();
    return w;
}

// ---------------------------------------------------------------------------
// Memory

Expr Memory::read_byte(std::uint64_t offset) const
{
    auto it = bytes_.find(offset);
    return it == bytes_.end() ? zero_byte() : it->second;
}

void Memory::write_byte(std::uint64_t offset, const Expr& value)
{
    if (value.is_constant() && value.value() == 0)
        bytes_.erase(offset);
    else
        bytes_[offset] = value;
}

Expr Memory::read(std::uint64_t offset, std::size_t size) const
{
    return join(slice(offset, size));
}

std::vector<Expr> Memory::slice(std::uint64_t offset, std::size_t size) const
{
    std::vector<Expr> out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i)
        out.push_back(read_byte(offset + i));
    return out;
}

void Memory::touch(std::uint64_t offset, std::uint64_t size)
{
    if (size == 0)
        return;
    const std::uint64_t end = (offset + size + 31) / 32 * 32;
    watermark_ = std::max(watermark_, end);
}

void Memory::serialize(engine::BlobWriter& out) const
{
    out.u64(watermark_);
    out.u32(static_cast<std::uint32_t>(bytes_.size()));
    for (const auto& [off, v] : bytes_)
    {
        out.u64(off);
        out.expr(v);
    }
}

Memory Memory::deserialize(engine::BlobReader& in)
{
    Memory m;
    m.watermark_ = in.u64();
    for (auto n = in.u32(); n > 0; --n)
    {
        const auto off = in.u64();
        m.bytes_.emplace(off, in.expr());
    }
    return m;
}

// ---------------------------------------------------------------------------
// Context

std::unique_ptr<engine::PlatformContext> EVMContext::clone() const
{
    return std::make_unique<EVMContext>(*this);
}

void EVMContext::serialize(engine::BlobWriter& out) const
{
    world.serialize(out);
    out.u32(static_cast<std::uint32_t>(frames.size()));
    for (const auto& f : frames)
    {
        out.word(f.address);
        out.word(f.caller);
        out.expr(f.value);
        write_exprs(out, f.calldata);
        out.bytes(f.code->bytes);
        out.u64(f.pc);
        write_exprs(out, f.stack);
        f.memory.serialize(out);
        write_exprs(out, f.returndata);
        f.snapshot.serialize(out);
        out.u64(f.ret_offset);
        out.u64(f.ret_size);
    }
    out.u64(gas);
    out.boolean(final_transaction);
    out.u32(static_cast<std::uint32_t>(transactions.size()));
    for (const auto& t : transactions)
    {
        out.word(t.caller);
        out.word(t.target);
        out.expr(t.value);
        write_exprs(out, t.data);
        out.boolean(t.symbolic);
    }
    write_exprs(out, output);
}

std::unique_ptr<EVMContext> EVMContext::deserialize(engine::BlobReader& in)
{
    auto ctx = std::make_unique<EVMContext>();
    ctx->world = World::deserialize(in);
    ctx->frames.resize(in.u32());
    for (auto& f : ctx->frames)
    {
        f.address = in.word();
        f.caller = in.word();
        f.value = in.expr();
        f.calldata = read_exprs(in);
        f.code = Code::make(in.bytes());
        f.pc = in.u64();
        f.stack = read_exprs(in);
        f.memory = Memory::deserialize(in);
        f.returndata = read_exprs(in);
        f.snapshot = World::deserialize(in);
        f.ret_offset = in.u64();
        f.ret_size = in.u64();
    }
    ctx->gas = in.u64();
    ctx->final_transaction = in.boolean();
    ctx->transactions.resize(in.u32());
    for (auto& t : ctx->transactions)
    {
        t.caller = in.word();
        t.target = in.word();
        t.value = in.expr();
        t.data = read_exprs(in);
        t.symbolic = in.boolean();
    }
    ctx->output = read_exprs(in);
    return ctx;
}

// ---------------------------------------------------------------------------
// Interpreter

namespace
{
/// One instruction in flight. Nothing is mutated until the instruction
/// commits, so a Concretize can re-run it from the start.
class Step
{
public:
    Step(State& state, engine::StepEnv& env)
        : state_{state}, env_{env}, ctx_{state.context<EVMContext>()}, frame_{ctx_.frames.back()}
    {
    }

    StepResult run();

private:
    const Expr& arg(std::size_t i) const { return frame_.stack[frame_.stack.size() - 1 - i]; }

    /// Concrete value of `e`, or nullopt after recording how to obtain one.
    std::optional<Word> need(const Expr& e, Policy policy, std::optional<Expr> guard = std::nullopt)
    {
        if (auto v = state_.concrete(e))
            return v;
        if (!pending_)
        {
            Concretize c;
            c.expression = e;
            c.policy = policy;
            c.guard = std::move(guard);
            c.reexecute = true;
            pending_ = StepResult{std::move(c)};
        }
        return std::nullopt;
    }

    /// Offset/size pair for a memory-like access. nullopt: pending or fault.
    bool range(const Expr& offset, const Expr& size, std::uint64_t& off, std::uint64_t& len)
    {
        const auto n = need(size, Policy::one());
        if (!n)
            return false;
        if (*n == 0)
        {
            off = 0;
            len = 0;
            return true;
        }
        const auto o = need(offset, Policy::all());
        if (!o)
            return false;
        if (*o >= kMemoryLimit || *n >= kMemoryLimit || *o + *n > kMemoryLimit)
        {
            fault_ = Termination::out_of_gas();
            return false;
        }
        off = to_u64(*o);
        len = to_u64(*n);
        return true;
    }

    /// Stops on a pending concretization or fault recorded by need()/range().
    StepResult stalled()
    {
        if (pending_)
            return std::move(*pending_);
        return halt(*fault_, {});
    }

    StepResult commit(std::size_t pops, std::vector<Expr> pushes, std::uint64_t cost, std::optional<std::size_t> jump = {})
    {
        if (cost > ctx_.gas)
            return halt(Termination::out_of_gas(), {});
        ctx_.gas -= cost;
        for (std::size_t i = 0; i < pops; ++i)
        {
            env_.instruction.operands.push_back(frame_.stack.back());
            frame_.stack.pop_back();
        }
        for (auto& p : pushes)
        {
            env_.instruction.results.push_back(p);
            frame_.stack.push_back(std::move(p));
        }
        frame_.pc = jump ? *jump : frame_.pc + 1 + immediate_size(opcode_);
        return Continue{};
    }

    StepResult halt(Termination reason, std::vector<Expr> output);
    StepResult call();
    StepResult sha3();

    State& state_;
    engine::StepEnv& env_;
    EVMContext& ctx_;
    Frame& frame_;
    std::uint8_t opcode_ = 0;
    const OpInfo* info_ = nullptr;
    std::optional<StepResult> pending_;
    std::optional<Termination> fault_;
};

StepResult Step::halt(Termination reason, std::vector<Expr> output)
{
    const bool success = reason.kind == engine::TerminationKind::Exit;
    Frame done = std::move(ctx_.frames.back());
    ctx_.frames.pop_back();
    if (!success)
        ctx_.world = std::move(done.snapshot);
    if (ctx_.frames.empty())
    {
        ctx_.output = reason.kind == engine::TerminationKind::InvalidInstruction ? std::vector<Expr>{} : output;
        if (success && !ctx_.final_transaction)
            return Suspend{};
        return Terminate{reason};
    }
    // Back in the caller: the CALL instruction completes now.
    Frame& caller = ctx_.frames.back();
    if (success)
        for (std::size_t i = 0; i < std::min<std::size_t>(caller.ret_size, output.size()); ++i)
            caller.memory.write_byte(caller.ret_offset + i, output[i]);
    const bool keeps_output = success || reason.kind == engine::TerminationKind::Revert;
    caller.returndata = keeps_output ? std::move(output) : std::vector<Expr>{};
    caller.stack.push_back(w256(success ? 1 : 0));
    caller.pc += 1;
    return Continue{};
}

StepResult Step::sha3()
{
    std::uint64_t off = 0;
    std::uint64_t len = 0;
    if (!range(arg(0), arg(1), off, len))
        return stalled();
    const std::uint64_t cost = 30 + 6 * ((len + 31) / 32);
    if (cost > ctx_.gas)
        return halt(Termination::out_of_gas(), {});
    frame_.memory.touch(off, len);
    const auto bytes = frame_.memory.slice(off, len);

    // Concretize symbolic 32-byte chunks one at a time.
    std::vector<std::uint8_t> preimage;
    std::vector<Expr> symbolic_chunks;
    std::vector<Word> chunk_values;
    for (std::size_t at = 0; at < bytes.size(); at += 32)
    {
        const std::vector<Expr> part(bytes.begin() + static_cast<std::ptrdiff_t>(at),
            bytes.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(at + 32, bytes.size())));
        const Expr chunk = join(part);
        const auto v = need(chunk, Policy::one());
        if (!v)
            return stalled();
        if (!chunk.is_constant())
        {
            symbolic_chunks.push_back(chunk);
            chunk_values.push_back(*v);
        }
        for (std::size_t i = part.size(); i-- > 0;)
            preimage.push_back(static_cast<std::uint8_t>(((*v) >> (8 * i)) & 0xff));
    }
    const Word digest = keccak256_word(preimage);
    auto& pairs = ctx_.world.sha3_pairs;
    if (!symbolic_chunks.empty())
    {
        // Distinct recorded preimages of the same length keep distinct digests.
        for (const auto& p : pairs)
        {
            if (p.preimage.size() != preimage.size() || p.digest == digest)
                continue;
            Expr differs = Expr::boolean(false);
            for (std::size_t at = 0; at < bytes.size(); at += 32)
            {
                const std::size_t n = std::min<std::size_t>(32, bytes.size() - at);
                Word other = 0;
                for (std::size_t i = 0; i < n; ++i)
                    other = (other << 8) | p.preimage[at + i];
                const std::vector<Expr> part(bytes.begin() + static_cast<std::ptrdiff_t>(at),
                    bytes.begin() + static_cast<std::ptrdiff_t>(at + n));
                differs = smt::lor(differs, smt::ne(join(part), Expr::constant(other, static_cast<unsigned>(8 * n))));
            }
            state_.constrain(differs);
        }
    }
    const bool known = std::any_of(pairs.begin(), pairs.end(), [&](const Sha3Pair& p) { return p.preimage == preimage; });
    if (!known)
        pairs.push_back({preimage, digest});
    return commit(2, {w256(digest)}, cost);
}

StepResult Step::call()
{
    // gas, address, value, args offset, args size, ret offset, ret size
    const Expr target_expr = smt::bvand(arg(1), w256(address_mask()));
    std::optional<Word> target;
    if (target_expr.is_constant())
        target = target_expr.value();
    else
    {
        Expr known = Expr::boolean(false);
        for (const auto& [addr, acct] : ctx_.world.accounts)
            known = smt::lor(known, smt::eq(target_expr, w256(addr)));
        target = need(target_expr, Policy::all(ctx_.world.accounts.size()), known);
        if (!target)
            return stalled();
    }
    std::uint64_t args_off = 0, args_len = 0, ret_off = 0, ret_len = 0;
    if (!range(arg(3), arg(4), args_off, args_len) || !range(arg(5), arg(6), ret_off, ret_len))
        return stalled();

    const Expr value = arg(2);
    const Expr sufficient = smt::ule(value, ctx_.world.balance_of(w256(frame_.address)));
    const auto ok = need(sufficient, Policy::all());
    if (!ok)
        return stalled();

    const std::uint64_t cost = info_->gas;
    if (cost > ctx_.gas)
        return halt(Termination::out_of_gas(), {});
    frame_.memory.touch(args_off, args_len);
    frame_.memory.touch(ret_off, ret_len);
    auto args = frame_.memory.slice(args_off, args_len);

    if (*ok == 0 || ctx_.frames.size() >= kMaxCallDepth)
    {
        frame_.returndata.clear();
        return commit(7, {w256(0)}, cost);
    }

    World snapshot = ctx_.world;
    if (!ctx_.world.find(*target))
        ctx_.world.create_account(Word(0), *target);
    Account& from = *ctx_.world.find(frame_.address);
    from.balance = smt::sub(from.balance, value);
    Account& to = *ctx_.world.find(*target);
    to.balance = smt::add(to.balance, value);

    if (to.code->bytes.empty())
    {
        frame_.returndata.clear();
        return commit(7, {w256(1)}, cost);
    }

    // Pop the arguments now; the result is pushed when the callee halts.
    ctx_.gas -= cost;
    for (int i = 0; i < 7; ++i)
    {
        env_.instruction.operands.push_back(frame_.stack.back());
        frame_.stack.pop_back();
    }
    frame_.ret_offset = ret_off;
    frame_.ret_size = ret_len;
    Frame callee;
    callee.address = *target;
    callee.caller = frame_.address;
    callee.value = value;
    callee.calldata = std::move(args);
    callee.code = to.code;
    callee.snapshot = std::move(snapshot);
    ctx_.frames.push_back(std::move(callee));
    return Continue{};
}

StepResult Step::run()
{
    const auto& code = frame_.code->bytes;
    opcode_ = frame_.pc < code.size() ? code[frame_.pc] : op::STOP;
    info_ = op_info(opcode_);
    env_.instruction.opcode = opcode_;
    if (info_ == nullptr)
    {
        env_.instruction.mnemonic = "INVALID";
        return halt(Termination::invalid_instruction(), {});
    }
    env_.instruction.mnemonic = std::string(info_->name);
    if (frame_.stack.size() < info_->pops || frame_.stack.size() - info_->pops + info_->pushes > kMaxStack)
        return halt(Termination::invalid_instruction(), {});
    if (info_->gas > ctx_.gas)
        return halt(Termination::out_of_gas(), {});

    const std::uint64_t cost = info_->gas;
    auto bool_word = [](const Expr& b) { return smt::bool_to_bv(b, 256); };
    auto binary = [&](auto&& f) { return commit(2, {f(arg(0), arg(1))}, cost); };
    const Expr zero = w256(0);

    if (opcode_ >= op::PUSH1 && opcode_ <= op::PUSH32)
    {
        Word v = 0;
        for (unsigned i = 0; i < immediate_size(opcode_); ++i)
        {
            const std::size_t at = frame_.pc + 1 + i;
            v = (v << 8) | (at < code.size() ? code[at] : 0);
        }
        return commit(0, {w256(v)}, cost);
    }
    if (opcode_ >= op::DUP1 && opcode_ <= op::DUP16)
    {
        const std::size_t n = opcode_ - op::DUP1 + 1;
        const Expr copy = arg(n - 1);
        if (cost > ctx_.gas)
            return halt(Termination::out_of_gas(), {});
        ctx_.gas -= cost;
        frame_.stack.push_back(copy);
        env_.instruction.results.push_back(copy);
        frame_.pc += 1;
        return Continue{};
    }
    if (opcode_ >= op::SWAP1 && opcode_ <= op::SWAP16)
    {
        const std::size_t n = opcode_ - op::SWAP1 + 1;
        ctx_.gas -= cost;
        std::swap(frame_.stack[frame_.stack.size() - 1], frame_.stack[frame_.stack.size() - 1 - n]);
        frame_.pc += 1;
        return Continue{};
    }

    switch (opcode_)
    {
    case op::STOP:
        return halt(Termination::exit(0), {});
    case op::ADD:
        return binary([](const Expr& a, const Expr& b) { return smt::add(a, b); });
    case op::MUL:
        return binary([](const Expr& a, const Expr& b) { return smt::mul(a, b); });
    case op::SUB:
        return binary([](const Expr& a, const Expr& b) { return smt::sub(a, b); });
    case op::DIV:
        return binary([&](const Expr& a, const Expr& b) { return smt::ite(smt::eq(b, zero), zero, smt::udiv(a, b)); });
    case op::SDIV:
        return binary([&](const Expr& a, const Expr& b) { return smt::ite(smt::eq(b, zero), zero, smt::sdiv(a, b)); });
    case op::MOD:
        return binary([&](const Expr& a, const Expr& b) { return smt::ite(smt::eq(b, zero), zero, smt::urem(a, b)); });
    case op::SMOD:
        return binary([&](const Expr& a, const Expr& b) { return smt::ite(smt::eq(b, zero), zero, smt::srem(a, b)); });
    case op::LT:
        return binary([&](const Expr& a, const Expr& b) { return bool_word(smt::ult(a, b)); });
    case op::GT:
        return binary([&](const Expr& a, const Expr& b) { return bool_word(smt::ugt(a, b)); });
    case op::SLT:
        return binary([&](const Expr& a, const Expr& b) { return bool_word(smt::slt(a, b)); });
    case op::SGT:
        return binary([&](const Expr& a, const Expr& b) { return bool_word(smt::slt(b, a)); });
    case op::EQ:
        return binary([&](const Expr& a, const Expr& b) { return bool_word(smt::eq(a, b)); });
    case op::ISZERO:
        return commit(1, {bool_word(smt::eq(arg(0), zero))}, cost);
    case op::AND:
        return binary([](const Expr& a, const Expr& b) { return smt::bvand(a, b); });
    case op::OR:
        return binary([](const Expr& a, const Expr& b) { return smt::bvor(a, b); });
    case op::XOR:
        return binary([](const Expr& a, const Expr& b) { return smt::bvxor(a, b); });
    case op::NOT:
        return commit(1, {smt::bvnot(arg(0))}, cost);
    case op::BYTE:
        return binary([&](const Expr& i, const Expr& x) {
            const Expr shift = smt::mul(smt::sub(w256(31), i), w256(8));
            return smt::ite(smt::ult(i, w256(32)), smt::bvand(smt::lshr(x, shift), w256(0xff)), zero);
        });
    case op::SHL:
        return binary([](const Expr& s, const Expr& x) { return smt::shl(x, s); });
    case op::SHR:
        return binary([](const Expr& s, const Expr& x) { return smt::lshr(x, s); });
    case op::SAR:
        return binary([](const Expr& s, const Expr& x) { return smt::ashr(x, s); });
    case op::SHA3:
        return sha3();
    case op::ADDRESS:
        return commit(0, {w256(frame_.address)}, cost);
    case op::BALANCE:
        return commit(1, {ctx_.world.balance_of(smt::bvand(arg(0), w256(address_mask())))}, cost);
    case op::CALLER:
        return commit(0, {w256(frame_.caller)}, cost);
    case op::CALLVALUE:
        return commit(0, {frame_.value}, cost);
    case op::CALLDATALOAD: {
        const auto off = need(arg(0), Policy::all());
        if (!off)
            return stalled();
        std::vector<Expr> word;
        for (std::size_t i = 0; i < 32; ++i)
        {
            const Word at = *off + i;
            word.push_back(at < frame_.calldata.size() ? frame_.calldata[to_u64(at)] : zero_byte());
        }
        return commit(1, {join(word)}, cost);
    }
    case op::CALLDATASIZE:
        return commit(0, {w256(frame_.calldata.size())}, cost);
    case op::CALLDATACOPY:
    case op::CODECOPY:
    case op::RETURNDATACOPY: {
        std::uint64_t dest = 0, len = 0;
        if (!range(arg(0), arg(2), dest, len))
            return stalled();
        std::optional<Word> src = len == 0 ? std::optional<Word>{0} : need(arg(1), Policy::all());
        if (!src)
            return stalled();
        if (opcode_ == op::RETURNDATACOPY && *src + len > frame_.returndata.size())
            return halt(Termination::invalid_instruction(), {});
        frame_.memory.touch(dest, len);
        for (std::uint64_t i = 0; i < len; ++i)
        {
            const Word at = *src + i;
            Expr b = zero_byte();
            if (opcode_ == op::CALLDATACOPY && at < frame_.calldata.size())
                b = frame_.calldata[to_u64(at)];
            else if (opcode_ == op::CODECOPY && at < code.size())
                b = Expr::constant(code[to_u64(at)], 8);
            else if (opcode_ == op::RETURNDATACOPY)
                b = frame_.returndata[to_u64(at)];
            frame_.memory.write_byte(dest + i, b);
        }
        return commit(3, {}, cost);
    }
    case op::CODESIZE:
        return commit(0, {w256(code.size())}, cost);
    case op::RETURNDATASIZE:
        return commit(0, {w256(frame_.returndata.size())}, cost);
    case op::POP:
        return commit(1, {}, cost);
    case op::MLOAD: {
        std::uint64_t off = 0, len = 0;
        if (!range(arg(0), w256(32), off, len))
            return stalled();
        frame_.memory.touch(off, 32);
        const Expr v = frame_.memory.read(off, 32);
        env_.events.emit(engine::Event{.kind = engine::EventKind::MemoryRead, .state = state_,
            .location = make_location(frame_.address, frame_.pc), .address = w256(off), .value = v, .size = 32});
        return commit(1, {v}, cost);
    }
    case op::MSTORE:
    case op::MSTORE8: {
        const std::size_t width = opcode_ == op::MSTORE ? 32 : 1;
        std::uint64_t off = 0, len = 0;
        if (!range(arg(0), w256(width), off, len))
            return stalled();
        if (cost > ctx_.gas)
            return halt(Termination::out_of_gas(), {});
        frame_.memory.touch(off, width);
        const Expr& v = arg(1);
        for (std::size_t i = 0; i < width; ++i)
        {
            const unsigned lo = static_cast<unsigned>(8 * (width - 1 - i));
            frame_.memory.write_byte(off + i, smt::extract(lo + 7, lo, v));
        }
        env_.events.emit(engine::Event{.kind = engine::EventKind::MemoryWrite, .state = state_,
            .location = make_location(frame_.address, frame_.pc), .address = w256(off), .value = v,
            .size = static_cast<unsigned>(width)});
        return commit(2, {}, cost);
    }
    case op::SLOAD: {
        const Account* a = ctx_.world.find(frame_.address);
        return commit(1, {smt::select(a->storage, arg(0))}, cost);
    }
    case op::SSTORE: {
        if (cost > ctx_.gas)
            return halt(Termination::out_of_gas(), {});
        Account* a = ctx_.world.find(frame_.address);
        a->storage = smt::store(a->storage, arg(0), arg(1));
        return commit(2, {}, cost);
    }
    case op::JUMP:
    case op::JUMPI: {
        if (opcode_ == op::JUMPI)
        {
            const auto taken = need(smt::ne(arg(1), zero), Policy::all());
            if (!taken)
                return stalled();
            if (*taken == 0)
                return commit(2, {}, cost);
        }
        const auto dest = need(arg(0), Policy::all(std::max<std::size_t>(1, frame_.code->jumpdests.size())));
        if (!dest)
            return stalled();
        if (*dest >= code.size() || !frame_.code->jumpdests.contains(to_u64(*dest)))
            return halt(Termination::invalid_instruction(), {});
        return commit(opcode_ == op::JUMP ? 1 : 2, {}, cost, to_u64(*dest));
    }
    case op::PC:
        return commit(0, {w256(frame_.pc)}, cost);
    case op::MSIZE:
        return commit(0, {w256(frame_.memory.size())}, cost);
    case op::GAS:
        return commit(0, {w256(ctx_.gas - cost)}, cost);
    case op::JUMPDEST:
        return commit(0, {}, cost);
    case op::RETURN:
    case op::REVERT: {
        std::uint64_t off = 0, len = 0;
        if (!range(arg(0), arg(1), off, len))
            return stalled();
        ctx_.gas -= cost;
        frame_.memory.touch(off, len);
        auto out = frame_.memory.slice(off, len);
        env_.instruction.operands = {arg(0), arg(1)};
        return halt(opcode_ == op::RETURN ? Termination::exit(0) : Termination::revert(), std::move(out));
    }
    case op::CALL:
        return call();
    default:
        break;
    }
    return halt(Termination::invalid_instruction(), {});
}
}  // namespace

std::uint64_t EVM::location(const State& state) const
{
    const auto& ctx = state.context<EVMContext>();
    if (ctx.frames.empty())
        return 0;
    return make_location(ctx.frames.back().address, ctx.frames.back().pc);
}

StepResult EVM::step(State& state, engine::StepEnv& env) const
{
    auto& ctx = state.context<EVMContext>();
    if (ctx.frames.empty())
        throw Error("no transaction is running on state " + std::to_string(state.id()));
    return Step{state, env}.run();
}

std::unique_ptr<engine::PlatformContext> EVM::deserialize_context(engine::BlobReader& in) const
{
    return EVMContext::deserialize(in);
}

engine::TestcaseFiles EVM::render_testcase(const State& state, const engine::Model& model) const
{
    const auto& ctx = state.context<EVMContext>();
    std::string input;
    for (const auto& tx : ctx.transactions)
    {
        std::vector<std::uint8_t> data;
        for (const auto& b : tx.data)
            data.push_back(static_cast<std::uint8_t>(smt::evaluate(b, model) & 0xff));
        input += "caller=" + hex_word(tx.caller) + " target=" + hex_word(tx.target) + " value="
            + hex_word(smt::evaluate(tx.value, model)) + " data=0x" + hex_string(data) + "\n";
    }
    std::vector<std::uint8_t> output;
    for (const auto& b : ctx.output)
        output.push_back(static_cast<std::uint8_t>(smt::evaluate(b, model) & 0xff));
    return {{"input", input}, {"output", hex_string(output) + "\n"}};
}

engine::State& add_world(engine::Engine& engine, World world)
{
    auto ctx = std::make_unique<EVMContext>();
    ctx->world = std::move(world);
    return engine.add_state(std::move(ctx));
}

void begin_transaction(State& state, Transaction tx, std::uint64_t gas, bool final_transaction)
{
    auto& ctx = state.context<EVMContext>();
    if (!ctx.frames.empty())
        throw Error("state " + std::to_string(state.id()) + " is already running a transaction");
    Account* target = ctx.world.find(tx.target);
    if (target == nullptr)
        throw Error("transaction target " + hex_word(tx.target) + " does not exist");
    Account* from = ctx.world.find(tx.caller);
    if (from == nullptr)
        throw Error("transaction caller " + hex_word(tx.caller) + " does not exist");

    state.constraints().add(smt::ule(tx.value, from->balance));
    // Counted before the snapshot: a reverted transaction was still applied.
    ++ctx.world.tx_count;
    Frame f;
    f.snapshot = ctx.world;
    from->balance = smt::sub(from->balance, tx.value);
    target = ctx.world.find(tx.target);
    target->balance = smt::add(target->balance, tx.value);
    f.address = tx.target;
    f.caller = tx.caller;
    f.value = tx.value;
    f.calldata = tx.data;
    f.code = target->code;
    ctx.frames.push_back(std::move(f));
    ctx.gas = gas;
    ctx.final_transaction = final_transaction;
    ctx.output.clear();
    ctx.transactions.push_back(std::move(tx));
}

std::size_t apply_symbolic_transaction(engine::Engine& engine, const Word& target, std::size_t data_size,
    std::uint64_t gas, bool final_transaction)
{
    const auto states = engine.ready_states();
    for (State* s : states)
    {
        auto& ctx = s->context<EVMContext>();
        const std::string n = std::to_string(ctx.world.tx_count);
        Transaction tx;
        tx.caller = caller_address();
        tx.target = target;
        tx.value = Expr::variable("txvalue_" + n, smt::Sort::bitvec(256));
        s->register_input(tx.value, "tx:" + n + ":value");
        for (std::size_t i = 0; i < data_size; ++i)
        {
            auto b = Expr::variable("txdata_" + n + "_" + std::to_string(i), smt::Sort::bitvec(8));
            s->register_input(b, "tx:" + n + ":data:" + std::to_string(i));
            tx.data.push_back(b);
        }
        begin_transaction(*s, std::move(tx), gas, final_transaction);
        engine.events().emit(engine::Event{.kind = engine::EventKind::SymbolicTransactionApplied, .state = *s,
            .location = make_location(target, 0)});
    }
    return states.size();
}

const engine::Report& explore_transactions(engine::Engine& engine, const Word& target, std::size_t count,
    std::size_t data_size, std::uint64_t gas)
{
    for (std::size_t i = 0; i < count; ++i)
    {
        if (apply_symbolic_transaction(engine, target, data_size, gas, i + 1 == count) == 0)
            break;
        const auto& report = engine.run();
        if (report.timed_out || report.limit_reached)
            break;
    }
    return engine.report();
}

}  // namespace symx::evm
