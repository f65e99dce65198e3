# Copyright 2026 The gotext Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Text-game engine, Go-Explore phase 1 and imitation/RL policies."""

from gotext._core import (
    Corpus,
    GameSpec,
    TextGame,
    bfs_shortest_win,
    bfs_winning_actions,
    build_corpus,
    exploration_comparison,
    generate_coin_game,
    generate_cooking_game,
    gradient_checks,
    load_corpus,
    random_rollouts,
    run_phase1,
    run_setting,
    split_corpus,
)

__all__ = [
    "Corpus",
    "GameSpec",
    "TextGame",
    "bfs_shortest_win",
    "bfs_winning_actions",
    "build_corpus",
    "exploration_comparison",
    "generate_coin_game",
    "generate_cooking_game",
    "gradient_checks",
    "load_corpus",
    "random_rollouts",
    "run_phase1",
    "run_setting",
    "split_corpus",
]
__version__ = "0.1.0"
