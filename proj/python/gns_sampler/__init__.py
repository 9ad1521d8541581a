# Copyright 2026 The GNS Sampler Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================

"""Python bindings for the GNS mini-batch sampling engine."""

from ._core import (  # noqa: F401
    CacheState,
    Graph,
    InvalidArgument,
    InvariantViolation,
    IoError,
    LayerBlock,
    MiniBatch,
    SamplerConfig,
    build_cache,
    build_csr,
    build_minibatch,
    degree_probs,
    generate_powerlaw,
    generate_sbm,
    gns_weight_paper,
    inclusion_prob,
    isolated_fraction,
    load_binary,
    random_walk_probs,
    sample_cache,
    sample_ladies,
    save_binary,
    train,
)

__all__ = [name for name in dir() if not name.startswith("_")]
