#!/usr/bin/env python3
"""Offline training recipe for the desk-scale digits MLP (64 -> 32 -> 10).

The simulator never trains; it consumes the files this script writes into
data/digits/. Re-running it reproduces them byte for byte on the same
library versions (torch + scikit-learn, CPU).

Recipe:
  * sklearn 8x8 digits, stratified 70/30 split (random_state=0).
  * Features quantized to 4-bit unsigned: x_q = round(x * 15 / 16).
  * Float MLP trained with Gaussian noise (0.3 of the batch std) injected
    on the hidden pre-activations and on the logits.
  * Per-tensor symmetric weight scale from the 80th percentile of |W|
    (values beyond are clamped); hidden activation scale = max ReLU output
    over the training set / 15. Both scales are frozen from here on.
  * Fine-tuning with the macro arithmetic in the loop: bit-serial inputs,
    32-row groups, nibble split and the full-span 5-bit 2CM / N2CM
    quantizers, straight-through gradients. Epochs alternate half-even and
    half-away-from-zero rounding so the model does not lean on tie breaks.
"""
import argparse
import json
import pathlib

import numpy as np
import torch
from sklearn.datasets import load_digits
from sklearn.model_selection import train_test_split

NOISE = 0.3
CLIP_PERCENTILE = 80.0
EPOCHS = 600
FINETUNE_EPOCHS = 150
FINETUNE_ADC_BITS = 5
GROUP_ROWS = 32


def round_away(v):
    return torch.sign(v) * torch.floor(torch.abs(v) + 0.5)


def adc(z, bits, signed, rnd):
    if signed:
        cmin, cmax = -(2 ** (bits - 1)), 2 ** (bits - 1) - 1
        neg = 8 * GROUP_ROWS / -cmin
        pos = 7 * GROUP_ROWS / cmax if cmax > 0 else 1.0
        c = torch.clamp(torch.where(z < 0, rnd(z / neg), rnd(z / pos)), cmin, cmax)
        return rnd(torch.where(c < 0, c * neg, c * pos))
    cmax = 2 ** bits - 1
    step = 15 * GROUP_ROWS / cmax
    return rnd(torch.clamp(rnd(z / step), 0, cmax) * step)


def ste(z, q):
    return z + (q - z).detach()


def macro_dot(x, wq, weight_bits, adc_bits, rnd, input_bits=4):
    """x: samples x rows, wq: integer-valued rows x cols (straight-through)."""
    if weight_bits == 8:
        lo = torch.remainder(wq.detach(), 16)
        hi = (wq - lo) / 16
    else:
        lo, hi = None, wq
    total = 0
    for i in range(input_bits):
        xb = torch.remainder(torch.floor(x / 2 ** i), 2)
        for g in range(0, wq.shape[0], GROUP_ROWS):
            h = xb[:, g:g + GROUP_ROWS] @ hi[g:g + GROUP_ROWS]
            p = ste(h, adc(h.detach(), adc_bits, True, rnd))
            if lo is not None:
                l = xb[:, g:g + GROUP_ROWS] @ lo[g:g + GROUP_ROWS]
                p = 16 * p + ste(l, adc(l.detach(), adc_bits, False, rnd))
            total = total + p * 2 ** i
    return total


def fake_quant(w, scale, bits):
    qmax = 2 ** (bits - 1) - 1
    return ste(w / scale, torch.clamp(torch.round(w / scale), -qmax - 1, qmax))


def percentile_scale(w, bits):
    return float(np.percentile(np.abs(w), CLIP_PERCENTILE)) / (2 ** (bits - 1) - 1)


def finetune(w1, w2, b1, b2, bits, x, y, input_scale):
    s1, s2 = percentile_scale(w1, bits), percentile_scale(w2, bits)
    xt = torch.tensor(x, dtype=torch.float64)
    yt = torch.tensor(y)
    p = [torch.tensor(v, dtype=torch.float64, requires_grad=True) for v in (w1, w2, b1, b2)]
    with torch.no_grad():
        a = torch.relu(xt @ fake_quant(p[0], s1, bits) * input_scale * s1 + p[2])
        act_scale = float(a.max()) / 15.0
    opt = torch.optim.Adam(p, lr=1e-3)
    for epoch in range(FINETUNE_EPOCHS):
        rnd = round_away if epoch % 2 else torch.round
        a = macro_dot(xt, fake_quant(p[0], s1, bits), bits, FINETUNE_ADC_BITS, rnd) * input_scale * s1 + p[2]
        a = torch.relu(a)
        aq = ste(a / act_scale, torch.clamp(torch.round(a / act_scale), 0, 15))
        o = macro_dot(aq, fake_quant(p[1], s2, bits), bits, FINETUNE_ADC_BITS, rnd) * act_scale * s2 + p[3]
        loss = torch.nn.functional.cross_entropy(o, yt)
        opt.zero_grad()
        loss.backward()
        opt.step()
    w1, w2, b1, b2 = (v.detach().numpy() for v in p)
    return w1, w2, b1, b2, s1, s2, act_scale


def quantize_weights(w, scale, bits):
    qmax = 2 ** (bits - 1) - 1
    return np.clip(np.round(w / scale), -qmax - 1, qmax).astype(int)


def write_matrix(path, m, precision):
    with open(path, "w") as f:
        f.write(f"{m.shape[0]},{m.shape[1]},{precision}\n")
        for row in m:
            f.write(",".join(str(int(v)) for v in row) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parents[1] / "data" / "digits"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    x, y = load_digits(return_X_y=True)
    x_tr, x_te, y_tr, y_te = train_test_split(x, y, test_size=0.3, random_state=0, stratify=y)
    xq_tr = np.round(x_tr * 15 / 16).astype(int)
    xq_te = np.round(x_te * 15 / 16).astype(int)
    input_scale = 16.0 / 15.0

    torch.set_num_threads(1)
    torch.manual_seed(0)
    xt = torch.tensor(xq_tr / 15.0, dtype=torch.float32)
    yt = torch.tensor(y_tr)
    l1 = torch.nn.Linear(64, 32)
    l2 = torch.nn.Linear(32, 10)
    opt = torch.optim.Adam(list(l1.parameters()) + list(l2.parameters()), lr=3e-3, weight_decay=1e-4)
    for _ in range(EPOCHS):
        h = l1(xt)
        h = torch.relu(h + NOISE * h.detach().std() * torch.randn_like(h))
        o = l2(h)
        o = o + NOISE * o.detach().std() * torch.randn_like(o)
        loss = torch.nn.functional.cross_entropy(o, yt)
        opt.zero_grad()
        loss.backward()
        opt.step()

    # trained on x_q / 15; fold to the 16/15 input scale used at inference
    w1 = l1.weight.detach().numpy().T.astype(float) * 15.0 / 16.0
    w2 = l2.weight.detach().numpy().T.astype(float)
    b1 = l1.bias.detach().numpy().astype(float)
    b2 = l2.bias.detach().numpy().astype(float)

    write_matrix(out / "digits_test.csv", np.column_stack([y_te, xq_te]), 4)

    for bits in (8, 4):
        torch.manual_seed(1)
        fw1, fw2, fb1, fb2, s1, s2, act_scale = finetune(w1, w2, b1, b2, bits, xq_tr, y_tr, input_scale)
        w1q = quantize_weights(fw1, s1, bits)
        w2q = quantize_weights(fw2, s2, bits)
        write_matrix(out / f"l1_w{bits}.csv", w1q, bits)
        write_matrix(out / f"l2_w{bits}.csv", w2q, bits)
        model = {
            "name": f"digits_mlp_w{bits}",
            "input_bits": 4,
            "input_scale": input_scale,
            "layers": [
                {"weights": f"l1_w{bits}.csv", "weight_bits": bits, "weight_scale": s1,
                 "bias": fb1.tolist(), "relu": True, "output_bits": 4, "output_scale": act_scale},
                {"weights": f"l2_w{bits}.csv", "weight_bits": bits, "weight_scale": s2,
                 "bias": fb2.tolist(), "relu": False, "output_bits": 0, "output_scale": 0.0},
            ],
        }
        (out / f"model_w{bits}.json").write_text(json.dumps(model, indent=2) + "\n")


if __name__ == "__main__":
    main()
