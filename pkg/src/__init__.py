# Plus-edge toolkit: signed complete graphs, embeddings, local search, oracles
__version__ = "1.0.0"
