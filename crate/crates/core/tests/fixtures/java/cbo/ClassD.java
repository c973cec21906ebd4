package test.cbo;

public class ClassD extends SuperC {
    public void reset() {
        super.init();
    }
}
