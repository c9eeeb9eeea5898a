"""Attention encoder-decoder over token ids, in plain numpy (float64).

Architecture: shared embedding matrix, bidirectional LSTM encoder, LSTM
decoder whose input at each step is [previous token embedding; fixed
context], where the fixed context is the concatenation of the final
forward and backward encoder states (also projected, through tanh layers,
into the decoder's initial hidden and cell states).  The output layer runs
bilinear attention over the encoder states and a tanh readout before the
softmax.

The backward pass is derived by hand; ``tests`` hold every parameter
group to agreement with central finite differences.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .vocab import BOS_ID, EOS_ID, PAD_ID

logger = logging.getLogger(__name__)

_NEG_INF = -1e30


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    emb_dim: int = 200
    hidden: int = 256
    max_src_len: int = 512

    def validate(self) -> None:
        if self.vocab_size < 5:
            raise ValueError("vocab_size must cover the reserved tokens")
        for name in ("emb_dim", "hidden", "max_src_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def expected_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    v, e, h = config.vocab_size, config.emb_dim, config.hidden
    return {
        "embed": (v, e),
        "enc_fw_W": (e + h, 4 * h),
        "enc_fw_b": (4 * h,),
        "enc_bw_W": (e + h, 4 * h),
        "enc_bw_b": (4 * h,),
        "init_h_W": (2 * h, h),
        "init_h_b": (h,),
        "init_c_W": (2 * h, h),
        "init_c_b": (h,),
        "dec_W": (e + 2 * h + h, 4 * h),
        "dec_b": (4 * h,),
        "attn_W": (h, 2 * h),
        "read_W": (h + 2 * h + e, h),
        "read_b": (h,),
        "out_W": (h, v),
        "out_b": (v,),
    }


def init_params(config: ModelConfig, seed: int = 0) -> dict[str, np.ndarray]:
    config.validate()
    rng = np.random.default_rng(seed)
    h = config.hidden
    params = {}
    for name, shape in expected_shapes(config).items():
        if name.endswith("_b"):
            params[name] = np.zeros(shape)
        else:
            params[name] = rng.uniform(-0.08, 0.08, size=shape)
    # Forget-gate bias starts at 1 so early training retains state.
    for name in ("enc_fw_b", "enc_bw_b", "dec_b"):
        params[name][h:2 * h] = 1.0
    return params


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _lstm_step(x, h_prev, c_prev, W, b, hidden):
    z = np.concatenate([x, h_prev], axis=-1) @ W + b
    i = _sigmoid(z[:, :hidden])
    f = _sigmoid(z[:, hidden:2 * hidden])
    g = np.tanh(z[:, 2 * hidden:3 * hidden])
    o = _sigmoid(z[:, 3 * hidden:])
    c = f * c_prev + i * g
    tanh_c = np.tanh(c)
    h = o * tanh_c
    cache = (x, h_prev, c_prev, i, f, g, o, tanh_c)
    return h, c, cache


def _lstm_step_backward(dh, dc_in, cache, W, hidden):
    x, h_prev, c_prev, i, f, g, o, tanh_c = cache
    do = dh * tanh_c
    dc = dc_in + dh * o * (1.0 - tanh_c ** 2)
    di = dc * g
    dgg = dc * i
    df = dc * c_prev
    dc_prev = dc * f
    dz = np.concatenate(
        [
            di * i * (1.0 - i),
            df * f * (1.0 - f),
            dgg * (1.0 - g ** 2),
            do * o * (1.0 - o),
        ],
        axis=-1,
    )
    xh = np.concatenate([x, h_prev], axis=-1)
    dW = xh.T @ dz
    db = dz.sum(axis=0)
    dxh = dz @ W.T
    dx = dxh[:, : x.shape[1]]
    dh_prev = dxh[:, x.shape[1]:]
    return dx, dh_prev, dc_prev, dW, db


def _softmax(x, axis=-1):
    m = np.max(x, axis=axis, keepdims=True)
    e = np.exp(x - m)
    return e / e.sum(axis=axis, keepdims=True)


def _log_softmax(x, axis=-1):
    m = np.max(x, axis=axis, keepdims=True)
    s = x - m
    return s - np.log(np.exp(s).sum(axis=axis, keepdims=True))


class EncodedSource(NamedTuple):
    """Single-document encoder output used at inference time."""

    states: np.ndarray      # (T, 2H)
    context: np.ndarray     # (2H,)
    h0: np.ndarray          # (H,)
    c0: np.ndarray          # (H,)


class DecodeStep(NamedTuple):
    probs: np.ndarray       # (V,), sums to 1
    state: tuple            # (h, c)
    attention: np.ndarray   # (T,), sums to 1


class Seq2SeqModel:
    def __init__(self, config: ModelConfig, params: dict[str, np.ndarray]):
        config.validate()
        self.config = config
        self.params = params
        self._check_shapes()

    @classmethod
    def init_random(cls, config: ModelConfig, seed: int = 0) -> "Seq2SeqModel":
        return cls(config, init_params(config, seed))

    def _check_shapes(self) -> None:
        for name, shape in expected_shapes(self.config).items():
            if name not in self.params:
                raise ValueError(f"missing parameter {name!r}")
            if self.params[name].shape != shape:
                raise ValueError(
                    f"parameter {name!r} has shape {self.params[name].shape}, "
                    f"expected {shape}"
                )

    # ------------------------------------------------------------------
    # batched training path
    # ------------------------------------------------------------------

    def _encode_batch(self, src, src_mask):
        p = self.params
        h = self.config.hidden
        B, T = src.shape
        emb = p["embed"][src]  # (B, T, E)

        def run(direction_W, direction_b, time_order):
            hs = np.zeros((B, T, h))
            caches = [None] * T
            h_t = np.zeros((B, h))
            c_t = np.zeros((B, h))
            for t in time_order:
                m = src_mask[:, t][:, None]
                h_new, c_new, cache = _lstm_step(
                    emb[:, t], h_t, c_t, direction_W, direction_b, h
                )
                h_t = m * h_new + (1.0 - m) * h_t
                c_t = m * c_new + (1.0 - m) * c_t
                hs[:, t] = h_t
                caches[t] = cache
            return hs, caches, h_t, c_t

        fw_hs, fw_caches, fw_final, _ = run(p["enc_fw_W"], p["enc_fw_b"], range(T))
        bw_hs, bw_caches, bw_final, _ = run(
            p["enc_bw_W"], p["enc_bw_b"], range(T - 1, -1, -1)
        )
        enc_states = np.concatenate([fw_hs, bw_hs], axis=-1)  # (B, T, 2H)
        ctx = np.concatenate([fw_final, bw_final], axis=-1)   # (B, 2H)
        pre_h0 = ctx @ p["init_h_W"] + p["init_h_b"]
        pre_c0 = ctx @ p["init_c_W"] + p["init_c_b"]
        h0 = np.tanh(pre_h0)
        c0 = np.tanh(pre_c0)
        cache = {
            "emb_src": emb,
            "src": src,
            "src_mask": src_mask,
            "fw_caches": fw_caches,
            "bw_caches": bw_caches,
            "enc_states": enc_states,
            "ctx": ctx,
            "h0": h0,
            "c0": c0,
        }
        return cache

    def _decoder_step_forward(self, prev_ids, h_prev, c_prev, enc_states, src_mask, ctx):
        """One teacher-forced decoder step over a batch."""
        p = self.params
        h_sz = self.config.hidden
        e_prev = p["embed"][prev_ids]  # (B, E)
        dec_in = np.concatenate([e_prev, ctx], axis=-1)
        h_d, c_d, lstm_cache = _lstm_step(dec_in, h_prev, c_prev, p["dec_W"], p["dec_b"], h_sz)

        q = h_d @ p["attn_W"]  # (B, 2H)
        scores = np.einsum("bd,btd->bt", q, enc_states)
        scores = np.where(src_mask > 0, scores, _NEG_INF)
        alpha = _softmax(scores, axis=-1)  # (B, T)
        ctx_att = np.einsum("bt,btd->bd", alpha, enc_states)

        read_in = np.concatenate([h_d, ctx_att, e_prev], axis=-1)
        r = np.tanh(read_in @ p["read_W"] + p["read_b"])
        logits = r @ p["out_W"] + p["out_b"]
        cache = {
            "prev_ids": prev_ids,
            "e_prev": e_prev,
            "lstm_cache": lstm_cache,
            "h_d": h_d,
            "q": q,
            "alpha": alpha,
            "ctx_att": ctx_att,
            "read_in": read_in,
            "r": r,
        }
        return logits, h_d, c_d, cache

    def forward_loss(self, batch) -> float:
        """Mean per-token negative log-likelihood (teacher forcing)."""
        loss, _ = self._forward(batch)
        return loss

    def _forward(self, batch):
        src, src_mask, y_in, y_out, t_mask = batch
        enc = self._encode_batch(src, src_mask)
        S = y_in.shape[1]
        h_t, c_t = enc["h0"], enc["c0"]
        step_caches = []
        total_nll = 0.0
        n_tokens = t_mask.sum()
        if n_tokens <= 0:
            raise ValueError("batch has no target tokens")
        for s in range(S):
            logits, h_t, c_t, cache = self._decoder_step_forward(
                y_in[:, s], h_t, c_t, enc["enc_states"], src_mask, enc["ctx"]
            )
            logp = _log_softmax(logits, axis=-1)
            picked = logp[np.arange(len(y_out)), y_out[:, s]]
            total_nll += -(picked * t_mask[:, s]).sum()
            cache["logp"] = logp
            step_caches.append(cache)
        loss = total_nll / n_tokens
        return loss, (enc, step_caches, batch)

    def loss_and_grads(self, batch):
        loss, (enc, step_caches, batch) = self._forward(batch)
        src, src_mask, y_in, y_out, t_mask = batch
        p = self.params
        h_sz = self.config.hidden
        B, T = src.shape
        S = y_in.shape[1]
        n_tokens = t_mask.sum()

        grads = {k: np.zeros_like(v) for k, v in p.items()}
        enc_states = enc["enc_states"]
        d_enc_states = np.zeros_like(enc_states)
        d_ctx = np.zeros_like(enc["ctx"])

        dh_next = np.zeros((B, h_sz))
        dc_next = np.zeros((B, h_sz))
        for s in range(S - 1, -1, -1):
            cache = step_caches[s]
            probs = np.exp(cache["logp"])
            dlogits = probs * t_mask[:, s][:, None]
            dlogits[np.arange(B), y_out[:, s]] -= t_mask[:, s]
            dlogits /= n_tokens

            grads["out_W"] += cache["r"].T @ dlogits
            grads["out_b"] += dlogits.sum(axis=0)
            dr = dlogits @ p["out_W"].T
            dpre_r = dr * (1.0 - cache["r"] ** 2)
            grads["read_W"] += cache["read_in"].T @ dpre_r
            grads["read_b"] += dpre_r.sum(axis=0)
            dread_in = dpre_r @ p["read_W"].T
            dh_d = dread_in[:, :h_sz].copy()
            dctx_att = dread_in[:, h_sz:3 * h_sz]
            de_prev = dread_in[:, 3 * h_sz:].copy()

            alpha = cache["alpha"]
            dalpha = np.einsum("bd,btd->bt", dctx_att, enc_states)
            d_enc_states += np.einsum("bt,bd->btd", alpha, dctx_att)
            dscores = alpha * (dalpha - (dalpha * alpha).sum(axis=-1, keepdims=True))
            dscores = dscores * src_mask
            dq = np.einsum("bt,btd->bd", dscores, enc_states)
            d_enc_states += np.einsum("bt,bd->btd", dscores, cache["q"])
            grads["attn_W"] += cache["h_d"].T @ dq
            dh_d += dq @ p["attn_W"].T

            dh_d += dh_next
            ddec_in, dh_prev, dc_prev, dW, db = _lstm_step_backward(
                dh_d, dc_next, cache["lstm_cache"], p["dec_W"], h_sz
            )
            grads["dec_W"] += dW
            grads["dec_b"] += db
            e_dim = self.config.emb_dim
            de_prev += ddec_in[:, :e_dim]
            d_ctx += ddec_in[:, e_dim:]
            np.add.at(grads["embed"], cache["prev_ids"], de_prev)
            dh_next, dc_next = dh_prev, dc_prev

        # initial decoder state projections
        dh0, dc0 = dh_next, dc_next
        dpre_h0 = dh0 * (1.0 - enc["h0"] ** 2)
        dpre_c0 = dc0 * (1.0 - enc["c0"] ** 2)
        grads["init_h_W"] += enc["ctx"].T @ dpre_h0
        grads["init_h_b"] += dpre_h0.sum(axis=0)
        grads["init_c_W"] += enc["ctx"].T @ dpre_c0
        grads["init_c_b"] += dpre_c0.sum(axis=0)
        d_ctx += dpre_h0 @ p["init_h_W"].T
        d_ctx += dpre_c0 @ p["init_c_W"].T

        d_fw_states = d_enc_states[:, :, :h_sz]
        d_bw_states = d_enc_states[:, :, h_sz:]
        d_fw_final = d_ctx[:, :h_sz]
        d_bw_final = d_ctx[:, h_sz:]

        d_emb_src = np.zeros_like(enc["emb_src"])

        def run_back(caches, per_step_dh, d_final, W_name, time_order):
            dh_carry = d_final.copy()
            dc_carry = np.zeros((B, h_sz))
            for t in time_order:
                m = src_mask[:, t][:, None]
                dh_t = dh_carry + per_step_dh[:, t]
                dx, dh_prev_cell, dc_prev_cell, dW, db = _lstm_step_backward(
                    dh_t * m, dc_carry * m, caches[t], p[W_name], h_sz
                )
                grads[W_name] += dW
                grads[W_name.replace("_W", "_b")] += db
                d_emb_src[:, t] += dx * m
                dh_carry = dh_prev_cell * m + dh_t * (1.0 - m)
                dc_carry = dc_prev_cell * m + dc_carry * (1.0 - m)

        run_back(enc["fw_caches"], d_fw_states, d_fw_final, "enc_fw_W", range(T - 1, -1, -1))
        run_back(enc["bw_caches"], d_bw_states, d_bw_final, "enc_bw_W", range(T))

        np.add.at(grads["embed"], src, d_emb_src)
        return loss, grads

    # ------------------------------------------------------------------
    # single-document inference path
    # ------------------------------------------------------------------

    def encode(self, src_ids) -> EncodedSource:
        """Encode one document; inputs longer than ``max_src_len`` are
        truncated (logged).  Raises ``ValueError`` on empty input."""
        ids = list(src_ids)
        if not ids:
            raise ValueError("cannot encode an empty input")
        if len(ids) > self.config.max_src_len:
            logger.info(
                "truncating source of %d tokens to max_src_len=%d",
                len(ids), self.config.max_src_len,
            )
            ids = ids[: self.config.max_src_len]
        src = np.array([ids], dtype=np.int64)
        mask = np.ones_like(src, dtype=np.float64)
        enc = self._encode_batch(src, mask)
        return EncodedSource(
            states=enc["enc_states"][0],
            context=enc["ctx"][0],
            h0=enc["h0"][0],
            c0=enc["c0"][0],
        )

    def initial_state(self, enc: EncodedSource):
        return (enc.h0.copy(), enc.c0.copy())

    def decode_step(self, prev_id: int, state, enc: EncodedSource) -> DecodeStep:
        """One decoder step: returns the next-token distribution (sums to 1),
        the new recurrent state, and the attention weights (sum to 1)."""
        h_prev, c_prev = state
        src_mask = np.ones((1, enc.states.shape[0]))
        logits, h_d, c_d, cache = self._decoder_step_forward(
            np.array([prev_id]),
            h_prev[None, :],
            c_prev[None, :],
            enc.states[None, :, :],
            src_mask,
            enc.context[None, :],
        )
        probs = _softmax(logits, axis=-1)[0]
        return DecodeStep(probs=probs, state=(h_d[0], c_d[0]), attention=cache["alpha"][0])


def attention_weights(query: np.ndarray, states: np.ndarray, attn_W: np.ndarray) -> np.ndarray:
    """Bilinear attention distribution of ``query`` (H,) over ``states``
    (T, 2H); exposed for property tests (reversal equivariance etc.)."""
    scores = states @ (query @ attn_W)
    return _softmax(scores, axis=-1)


def make_batch(pairs, pad_id: int = PAD_ID, eos_id: int = EOS_ID):
    """Pad a list of (src_ids, tgt_ids) into training arrays.

    Targets are wrapped as BOS-shifted inputs and EOS-terminated outputs.
    """
    B = len(pairs)
    T = max(len(s) for s, _ in pairs)
    S = max(len(t) for _, t in pairs) + 1  # room for EOS
    src = np.full((B, T), pad_id, dtype=np.int64)
    src_mask = np.zeros((B, T))
    y_in = np.full((B, S), pad_id, dtype=np.int64)
    y_out = np.full((B, S), pad_id, dtype=np.int64)
    t_mask = np.zeros((B, S))
    for b, (s_ids, t_ids) in enumerate(pairs):
        src[b, : len(s_ids)] = s_ids
        src_mask[b, : len(s_ids)] = 1.0
        full = list(t_ids) + [eos_id]
        y_in[b, 0] = BOS_ID
        y_in[b, 1: len(full)] = full[:-1]
        y_out[b, : len(full)] = full
        t_mask[b, : len(full)] = 1.0
    return src, src_mask, y_in, y_out, t_mask
