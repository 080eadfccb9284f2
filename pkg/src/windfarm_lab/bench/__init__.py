"""Scoring, wind-rose weights, interaction graphs, the yaw oracle and transfer runs."""

from .dag import InteractionDAG, build_dag
from .oracle import OracleResult, grid_search_oracle
from .scoring import ScoreReport, evaluate_score, read_score_csv, results_table, write_score_csv
from .transfer import TransferResult, compare_to_greedy, static_view, transfer_finetune
from .weights import EvalWeights, extract_weights
