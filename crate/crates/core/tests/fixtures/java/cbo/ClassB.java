package test.cbo;

public class ClassB {
    public int process(ClassC c) {
        return 1;
    }
}
