# coding:utf8
from ccfedsim.data.budget import (
    BudgetAssignment,
    assign_budgets,
    explicit_budgets,
    shuffle_budgets,
    two_group_budgets,
)
from ccfedsim.data.idx import load_idx
from ccfedsim.data.partition import PartitionPlan, partition
from ccfedsim.data.shard import DataShard
from ccfedsim.data.synthetic import generate_synthetic, train_test_split

__all__ = [
    "BudgetAssignment",
    "DataShard",
    "PartitionPlan",
    "assign_budgets",
    "explicit_budgets",
    "generate_synthetic",
    "load_idx",
    "partition",
    "shuffle_budgets",
    "train_test_split",
    "two_group_budgets",
]
