from __future__ import annotations

from typing import Callable

import torch
from torch import nn

from .loader import LoadedSpanningSet

_ACTIVATIONS: dict[str, Callable[[torch.Tensor], torch.Tensor]] = {
    "identity": lambda x: x,
    "relu": torch.relu,
    "tanh": torch.tanh,
}


def activation(name: str) -> Callable[[torch.Tensor], torch.Tensor]:
    try:
        return _ACTIVATIONS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown activation {name!r}") from None


class EquivariantLayer(nn.Module):
    """x -> act((Σ_i λ_i C_i) x + Σ_j μ_j c_j) for a batch of row vectors x.

    Inputs have shape (batch, cols) or (cols,); outputs (batch, rows) or (rows,).
    """

    def __init__(
        self,
        spanning_set: LoadedSpanningSet,
        bias_set: LoadedSpanningSet | None = None,
        act: str = "identity",
        dtype: torch.dtype = torch.float64,
    ) -> None:
        super().__init__()
        if bias_set is not None and (bias_set.cols != 1 or bias_set.rows != spanning_set.rows):
            raise ValueError(
                f"bias set must be {spanning_set.rows}x1, got {bias_set.rows}x{bias_set.cols}"
            )
        self.spanning_set = spanning_set
        self.rows, self.cols = spanning_set.rows, spanning_set.cols
        self.register_buffer("basis", spanning_set.stacked(dtype).to_dense().reshape(len(spanning_set), self.rows * self.cols))
        self.weight = nn.Parameter(torch.zeros(len(spanning_set), dtype=dtype))
        if bias_set is not None:
            self.register_buffer("bias_basis", bias_set.stacked(dtype).to_dense().reshape(len(bias_set), self.rows))
            self.bias = nn.Parameter(torch.zeros(len(bias_set), dtype=dtype))
        else:
            self.bias_basis = None
            self.bias = None
        self.act_name = act
        self.act = activation(act)

    def weight_matrix(self) -> torch.Tensor:
        return (self.weight @ self.basis).reshape(self.rows, self.cols)

    def bias_vector(self) -> torch.Tensor:
        if self.bias is None:
            return torch.zeros(self.rows, dtype=self.weight.dtype, device=self.weight.device)
        return self.bias @ self.bias_basis

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.shape[-1] != self.cols:
            raise ValueError(f"expected inputs with {self.cols} features, got {x.shape[-1]}")
        y = x @ self.weight_matrix().T + self.bias_vector()
        return self.act(y)
